#pragma once

// Physical model of the driven ground / exciton / biexciton ladder.
//
// Every 3x3 matrix in this library uses the basis order {BX, X_V, 0}
// (index 0 = biexciton, 1 = V-polarized exciton, 2 = ground state).
// Two-level matrices use {BX, 0}.

#include <Eigen/Core>
#include <complex>

#include "ftpe/units.hpp"

namespace ftpe {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3cd;
using Vec2 = Eigen::Vector2cd;

/// Row/column indices of the ladder basis.
enum Level : int { kBX = 0, kX = 1, kG = 2 };

/// One Gaussian pulse in the rotating frame. The complex amplitude is
/// f(t - center) * exp(-i*detuning*t + i*phase).
struct PulseSpec {
  double theta = 0.0;      ///< pulse area (rad)
  double s = 1.0;          ///< Gaussian standard deviation (ps)
  double center = 0.0;     ///< pulse center (ps)
  double detuning = 0.0;   ///< signed carrier offset (rad/ps)
  double phase = 0.0;      ///< carrier phase (rad)

  /// Throws std::invalid_argument unless s > 0 and theta >= 0.
  void validate() const;
};

/// Real envelope Θ/(√(2π)s)·exp(-(t-center)²/(2s²)) in rad/ps.
double envelope_value(const PulseSpec& p, double t);

/// Envelope times carrier.
cplx pulse_value(const PulseSpec& p, double t);

/// Dichromatic drive. The blue pulse carries +δ (factor e^{-iδt}) and is
/// centered at +τ/2; the red pulse carries -δ (factor e^{+iδt}) and is
/// centered at -τ/2, so that
///   Ω(t) = f(t-τ/2) e^{-iδt} + f(t+τ/2) e^{i(δt+φ)}.
struct DriveSpec {
  PulseSpec blue;
  PulseSpec red;

  /// Equal-area, equal-width pair with detuning ±delta (rad/ps), delay tau
  /// (ps) and relative phase on the red pulse.
  static DriveSpec symmetric(double theta, double s, double delta, double tau,
                             double phase = 0.0);

  double delay() const { return blue.center - red.center; }
  double delta() const { return blue.detuning; }

  /// Checks both pulses and the two-photon resonance red = -blue detuning.
  void validate() const;
};

cplx drive_value(const DriveSpec& d, double t);

struct LadderSystem {
  double e_b = 0.0;        ///< biexciton binding energy (meV), any sign
  double gamma_bx = 0.0;   ///< BX -> X decay rate (1/ps)
  double gamma_x = 0.0;    ///< X -> 0 decay rate (1/ps)

  void validate() const;
  bool is_closed() const { return gamma_bx == 0.0 && gamma_x == 0.0; }
};

/// H/ħ (rad/ps) for a given complex drive amplitude and exciton shift
/// E_b/(2ħ).
inline Mat3 ladder_generator(cplx omega, double exciton_shift) {
  const cplx h = 0.5 * omega;
  const cplx hc = std::conj(h);
  Mat3 m;
  m << 0.0, hc, 0.0,
       h, exciton_shift, hc,
       0.0, h, 0.0;
  return m;
}

/// Instantaneous ladder Hamiltonian in meV.
Mat3 hamiltonian_at(const LadderSystem& sys, const DriveSpec& d, double t);

/// STIRAP Hamiltonian ħ[[0,Ωp/2,0],[Ωp/2,Δ,Ωs/2],[0,Ωs/2,0]] in meV; all
/// arguments in rad/ps.
Mat3 stirap_hamiltonian_at(double omega_p, double omega_s, double delta_mid);

struct TimeWindow {
  double t0 = 0.0;
  double t1 = 0.0;
  double length() const { return t1 - t0; }
};

/// [min(center) - 8s, max(center) + 8s]; for a symmetric drive this is
/// [-8s - |τ|/2, 8s + |τ|/2].
TimeWindow default_window(const DriveSpec& d);

/// Default integration step min(s/200, (2π/|δ|)/80).
double default_dt(const DriveSpec& d);

/// Largest admissible step: (2π/|δ|)/40, or +inf for δ = 0.
double max_allowed_dt(const DriveSpec& d);

/// Gaussian standard deviation from a pulse duration τ0 using s = 4√(2 ln 2)·τ0.
double s_from_duration(double tau0);

}  // namespace ftpe
