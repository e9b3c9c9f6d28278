#include "ftpe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ftpe {

void PulseSpec::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("pulse width s must be positive, got " + std::to_string(s));
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("pulse area theta must be non-negative, got " +
                                std::to_string(theta));
  }
  if (!std::isfinite(center) || !std::isfinite(detuning) || !std::isfinite(phase)) {
    throw std::invalid_argument("pulse center/detuning/phase must be finite");
  }
}

double envelope_value(const PulseSpec& p, double t) {
  const double x = (t - p.center) / p.s;
  return p.theta / (std::sqrt(2.0 * kPi) * p.s) * std::exp(-0.5 * x * x);
}

cplx pulse_value(const PulseSpec& p, double t) {
  return envelope_value(p, t) * std::polar(1.0, p.phase - p.detuning * t);
}

DriveSpec DriveSpec::symmetric(double theta, double s, double delta, double tau,
                               double phase) {
  DriveSpec d;
  d.blue = PulseSpec{theta, s, 0.5 * tau, delta, 0.0};
  d.red = PulseSpec{theta, s, -0.5 * tau, -delta, phase};
  return d;
}

void DriveSpec::validate() const {
  blue.validate();
  red.validate();
  const double scale = std::max({1.0, std::abs(blue.detuning), std::abs(red.detuning)});
  if (std::abs(blue.detuning + red.detuning) > 1e-12 * scale) {
    throw std::invalid_argument("drive violates two-photon resonance: red detuning must equal "
                                "minus blue detuning");
  }
}

cplx drive_value(const DriveSpec& d, double t) {
  return pulse_value(d.blue, t) + pulse_value(d.red, t);
}

void LadderSystem::validate() const {
  if (!std::isfinite(e_b)) throw std::invalid_argument("e_b must be finite");
  if (!(gamma_bx >= 0.0) || !(gamma_x >= 0.0)) {
    throw std::invalid_argument("decay rates must be non-negative");
  }
}

Mat3 hamiltonian_at(const LadderSystem& sys, const DriveSpec& d, double t) {
  return kHbar * ladder_generator(drive_value(d, t), 0.5 * sys.e_b / kHbar);
}

Mat3 stirap_hamiltonian_at(double omega_p, double omega_s, double delta_mid) {
  Mat3 m;
  m << 0.0, 0.5 * omega_p, 0.0,
       0.5 * omega_p, delta_mid, 0.5 * omega_s,
       0.0, 0.5 * omega_s, 0.0;
  return kHbar * m;
}

TimeWindow default_window(const DriveSpec& d) {
  const double lo = std::min(d.blue.center - 8.0 * d.blue.s, d.red.center - 8.0 * d.red.s);
  const double hi = std::max(d.blue.center + 8.0 * d.blue.s, d.red.center + 8.0 * d.red.s);
  return {lo, hi};
}

double default_dt(const DriveSpec& d) {
  const double s = std::min(d.blue.s, d.red.s);
  double dt = s / 200.0;
  const double delta = std::abs(d.delta());
  if (delta > 0.0) dt = std::min(dt, 2.0 * kPi / delta / 80.0);
  return dt;
}

double max_allowed_dt(const DriveSpec& d) {
  const double delta = std::abs(d.delta());
  if (delta == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi / delta / 40.0;
}

double s_from_duration(double tau0) { return 4.0 * std::sqrt(2.0 * std::log(2.0)) * tau0; }

}  // namespace ftpe
