#include "ftpe/floquet.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ftpe/csv.hpp"
#include "ftpe/errors.hpp"
#include "ftpe/linalg.hpp"
#include "stepper.hpp"

namespace ftpe {

double FrozenDrive::period() const {
  if (delta == 0.0) throw std::invalid_argument("frozen drive needs a nonzero detuning");
  return 2.0 * kPi / std::abs(delta);
}

cplx FrozenDrive::omega(double t) const {
  return f_minus * std::polar(1.0, phase_minus - delta * t) +
         f_plus * std::polar(1.0, delta * t + phase_plus);
}

FrozenDrive FrozenDrive::at(const DriveSpec& d, double t) {
  return FrozenDrive{envelope_value(d.blue, t), envelope_value(d.red, t), d.delta(),
                     d.blue.phase, d.red.phase};
}

Mat3 frozen_generator(const LadderSystem& sys, const FrozenDrive& fd, double t) {
  return ladder_generator(fd.omega(t), 0.5 * sys.e_b / kHbar);
}

Mat3 period_propagator(const LadderSystem& sys, const FrozenDrive& fd, int steps_per_period) {
  if (steps_per_period < 1) throw std::invalid_argument("steps_per_period must be >= 1");
  const double period = fd.period();
  auto gen = [&](double t) { return frozen_generator(sys, fd, t); };
  return detail::unitary_over(gen, 0.0, period, period / steps_per_period,
                              Integrator::kMagnus4);
}

Mat3 stroboscopic_from_log(const LadderSystem& sys, const FrozenDrive& fd,
                           int steps_per_period) {
  const double period = fd.period();
  const Mat3 u = period_propagator(sys, fd, steps_per_period);
  return (kHbar / period) * log_unitary(u);
}

Mat2 schrieffer_wolff_reduce(const Mat3& hbar, const LadderSystem& sys) {
  if (std::abs(sys.e_b) < 1e-9) {
    throw DegenerateDenominator(
        "Schrieffer-Wolff reduction needs a nonzero biexciton binding energy");
  }
  // Zeroth-order diagonal: {0, E_b/2, 0}, so every denominator is -E_b/2.
  const double denom = -0.5 * sys.e_b;
  constexpr int idx[2] = {kBX, kG};
  Mat2 heff;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int m = idx[a];
      const int n = idx[b];
      const cplx second = hbar(m, kX) * hbar(kX, n);
      heff(a, b) = hbar(m, n) + 0.5 * (second / denom + second / denom);
    }
  }
  return heff;
}

double sw_coupling_ratio(const Mat3& hbar, const LadderSystem& sys) {
  const double gap = std::abs(0.5 * sys.e_b);
  if (gap == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(std::abs(hbar(kBX, kX)), std::abs(hbar(kG, kX))) / gap;
}

namespace {

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double EffectiveField::max_abs_bx() const { return max_abs_of(bx); }
double EffectiveField::max_abs_by() const { return max_abs_of(by); }
double EffectiveField::max_abs_bz() const { return max_abs_of(bz); }

void fields_from_effective(const Mat2& heff, double& bx, double& by, double& bz) {
  bx = 2.0 * heff(0, 1).real() / kHbar;
  by = -2.0 * heff(0, 1).imag() / kHbar;
  bz = (heff(0, 0).real() - heff(1, 1).real()) / kHbar;
}

EffectiveField effective_fields(const LadderSystem& sys, const DriveSpec& d,
                                std::span<const double> grid, const FieldOptions& opts) {
  d.validate();
  if (d.delta() == 0.0) {
    throw std::invalid_argument("effective fields need a nonzero detuning");
  }
  EffectiveField eff;
  const double period = 2.0 * kPi / std::abs(d.delta());
  const double s = std::min(d.blue.s, d.red.s);
  if (period > s / 3.0) {
    std::ostringstream msg;
    msg << "Floquet period " << period << " ps is not small against the pulse width (s/3 = "
        << s / 3.0 << " ps); the stroboscopic description is degraded";
    eff.warnings.push_back(msg.str());
  }

  eff.times.assign(grid.begin(), grid.end());
  eff.bx.resize(grid.size());
  eff.by.resize(grid.size());
  eff.bz.resize(grid.size());
  double worst_ratio = 0.0;
  double worst_ratio_time = 0.0;
  bool folded = false;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const FrozenDrive fd = FrozenDrive::at(d, t);
    Mat3 hbar;
    try {
      hbar = opts.route == FieldRoute::kLog
                 ? stroboscopic_from_log(sys, fd, opts.steps_per_period)
                 : magnus_sum(sys, fd, opts.magnus_order);
    } catch (const BranchAmbiguity& e) {
      std::ostringstream msg;
      msg << e.what() << " at coarse time t = " << t << " ps";
      throw BranchAmbiguity(msg.str(), t);
    }
    if (std::abs(hbar(kX, kX).real() - 0.5 * sys.e_b) > 0.25 * std::abs(sys.e_b)) folded = true;

    Mat2 heff;
    try {
      heff = schrieffer_wolff_reduce(hbar, sys);
    } catch (const DegenerateDenominator& e) {
      std::ostringstream msg;
      msg << e.what() << " (coarse time t = " << t << " ps)";
      throw DegenerateDenominator(msg.str());
    }
    const double ratio = sw_coupling_ratio(hbar, sys);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_ratio_time = t;
    }
    fields_from_effective(heff, eff.bx[i], eff.by[i], eff.bz[i]);
  }

  if (worst_ratio > 0.5) {
    std::ostringstream msg;
    msg << "exciton coupling ratio " << worst_ratio << " at t = " << worst_ratio_time
        << " ps exceeds 0.5; Schrieffer-Wolff reduction is not perturbative";
    eff.warnings.push_back(msg.str());
  }
  if (folded) {
    eff.warnings.push_back(
        "stroboscopic exciton energy folded by the principal branch (detuning below E_b/ħ)");
  }
  const double rel_phase = d.red.phase - d.blue.phase;
  const double bx_max = eff.max_abs_bx();
  if (rel_phase == 0.0 && eff.max_abs_by() > 1e-3 * bx_max) {
    std::ostringstream msg;
    msg << "B_y is not negligible: max|B_y| = " << eff.max_abs_by()
        << " rad/ps vs max|B_x| = " << bx_max << " rad/ps";
    eff.warnings.push_back(msg.str());
  }
  return eff;
}

std::vector<double> coarse_grid(const DriveSpec& d, std::size_t points) {
  const TimeWindow w = default_window(d);
  return uniform_grid(w.t0, w.t1, points);
}

namespace {

double field_norm(const EffectiveField& eff, std::size_t i) {
  return std::sqrt(eff.bx[i] * eff.bx[i] + eff.by[i] * eff.by[i] + eff.bz[i] * eff.bz[i]);
}

}  // namespace

EffectiveField densify(const EffectiveField& eff, double max_angle) {
  if (!(max_angle > 0.0)) throw std::invalid_argument("max_angle must be positive");
  EffectiveField out;
  out.warnings = eff.warnings;
  if (eff.size() == 0) return out;
  auto push = [&](double t, double x, double y, double z) {
    out.times.push_back(t);
    out.bx.push_back(x);
    out.by.push_back(y);
    out.bz.push_back(z);
  };
  push(eff.times[0], eff.bx[0], eff.by[0], eff.bz[0]);
  for (std::size_t i = 1; i < eff.size(); ++i) {
    const double dt = eff.times[i] - eff.times[i - 1];
    const double b = std::max(field_norm(eff, i - 1), field_norm(eff, i));
    // The 0.999 margin keeps each sub-interval strictly inside the bound.
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(dt * b / (0.999 * max_angle))));
    for (std::size_t k = 1; k <= n; ++k) {
      const double w = static_cast<double>(k) / static_cast<double>(n);
      const double t = k == n ? eff.times[i] : eff.times[i - 1] + w * dt;
      push(t, (1 - w) * eff.bx[i - 1] + w * eff.bx[i], (1 - w) * eff.by[i - 1] + w * eff.by[i],
           (1 - w) * eff.bz[i - 1] + w * eff.bz[i]);
    }
  }
  return out;
}

namespace {

void push_bloch(BlochTrajectory& traj, double t, const Vec2& psi) {
  const cplx c = std::conj(psi(0)) * psi(1);
  traj.times.push_back(t);
  traj.sx.push_back(2.0 * c.real());
  traj.sy.push_back(2.0 * c.imag());
  traj.sz.push_back(std::norm(psi(0)) - std::norm(psi(1)));
}

}  // namespace

BlochTrajectory propagate_effective(const EffectiveField& eff, const Vec2& psi0) {
  constexpr double kMaxAngle = 0.05;
  BlochTrajectory traj;
  if (eff.size() == 0) return traj;
  for (std::size_t i = 1; i < eff.size(); ++i) {
    const double dt = eff.times[i] - eff.times[i - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("effective field grid must be increasing");
    const double angle = dt * std::max(field_norm(eff, i - 1), field_norm(eff, i));
    if (angle > kMaxAngle) {
      std::ostringstream msg;
      msg << "effective-field sampling too coarse at t = " << eff.times[i - 1]
          << " ps: rotation " << angle << " rad per step exceeds " << kMaxAngle;
      throw StepTooLarge(msg.str());
    }
  }

  Vec2 psi = psi0;
  push_bloch(traj, eff.times[0], psi);
  for (std::size_t i = 1; i < eff.size(); ++i) {
    const double dt = eff.times[i] - eff.times[i - 1];
    const double x = 0.5 * (eff.bx[i - 1] + eff.bx[i]);
    const double y = 0.5 * (eff.by[i - 1] + eff.by[i]);
    const double z = 0.5 * (eff.bz[i - 1] + eff.bz[i]);
    const double b = std::sqrt(x * x + y * y + z * z);
    if (b > 0.0) {
      // exp(-i (B·σ) dt / 2)
      const double c = std::cos(0.5 * b * dt);
      const double s = std::sin(0.5 * b * dt) / b;
      Mat2 u;
      u << cplx(c, -s * z), cplx(-s * y, -s * x),
           cplx(s * y, -s * x), cplx(c, s * z);
      psi = u * psi;
    }
    push_bloch(traj, eff.times[i], psi);
  }
  return traj;
}

BlochTrajectory bloch_from_amplitudes(const TimeSeries& ts) {
  if (ts.amplitudes.size() != ts.times.size()) {
    throw std::invalid_argument("Bloch trajectory needs recorded amplitudes");
  }
  BlochTrajectory traj;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    push_bloch(traj, ts.times[i], Vec2(ts.amplitudes[i](kBX), ts.amplitudes[i](kG)));
  }
  return traj;
}

double effective_pulse_area(const LadderSystem& sys, const DriveSpec& d) {
  d.validate();
  if (d.delay() != 0.0 || d.red.phase != d.blue.phase) {
    throw std::invalid_argument("effective pulse area requires zero delay and zero phase");
  }
  if (d.delta() == 0.0) throw std::invalid_argument("effective pulse area needs delta != 0");
  const double eb = sys.e_b / kHbar;  // rad/ps
  const double delta2 = d.delta() * d.delta();
  const double s = d.blue.s;
  const double theta = d.blue.theta;
  return eb / (8.0 * std::sqrt(kPi) * delta2 * s) * (1.0 - eb * eb / (2.0 * delta2)) * theta *
         theta;
}

double predicted_bx_occupation(const LadderSystem& sys, const DriveSpec& d) {
  const double lambda = effective_pulse_area(sys, d);
  const double s = std::sin(lambda);
  return s * s;
}

void write_csv(std::ostream& out, const EffectiveField& eff) {
  csv::write_header(out, {"t_ps", "bx", "by", "bz"});
  for (std::size_t i = 0; i < eff.size(); ++i) {
    csv::write_row(out, {eff.times[i], eff.bx[i], eff.by[i], eff.bz[i]});
  }
}

void write_csv(std::ostream& out, const BlochTrajectory& traj) {
  csv::write_header(out, {"t_ps", "sx", "sy", "sz"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    csv::write_row(out, {traj.times[i], traj.sx[i], traj.sy[i], traj.sz[i]});
  }
}

}  // namespace ftpe
