#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ftpe/model.hpp"

namespace ftpe {

/// Per-step exponential integrators. Both exponentiate a Hermitian 3x3 step
/// generator by eigendecomposition, so every step is exactly unitary.
enum class Integrator {
  kMidpoint,  ///< exp(-i H(t+h/2) h/ħ), order 2
  kMagnus4,   ///< two-point Gauss-Legendre Magnus, order 4
};

/// H(t)/ħ in rad/ps.
using Generator = std::function<Mat3(double)>;

struct PropagationOptions {
  double dt_max = 0.0;  ///< <= 0 selects default_dt(drive)
  Integrator integrator = Integrator::kMagnus4;
  bool keep_amplitudes = false;
};

struct PureState {
  Vec3 amplitudes = Vec3(0.0, 0.0, 1.0);

  static PureState basis(Level level);
  static PureState ground() { return basis(kG); }
  double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
  Mat3 rho = Mat3::Zero();

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix basis(Level level) { return pure(PureState::basis(level)); }
  double trace() const { return rho.trace().real(); }
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
};

/// Occupations (P_BX, P_X, P_0) sampled on a monotone time grid.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::array<double, 3>> occupations;
  std::vector<Vec3> amplitudes;  ///< empty unless requested (pure states only)

  std::size_t size() const { return times.size(); }
  const std::array<double, 3>& final_occupations() const { return occupations.back(); }
  double final_bx() const { return occupations.back()[kBX]; }
};

/// Number of equal sub-steps of length <= dt_max covering [t0, t1].
std::size_t step_count(double t0, double t1, double dt_max);

/// Time-ordered U(t1, t0). Throws StepTooLarge if dt_max exceeds
/// max_allowed_dt(d).
Mat3 propagate_unitary(const LadderSystem& sys, const DriveSpec& d, double t0, double t1,
                       double dt_max, Integrator integrator = Integrator::kMagnus4);

/// Same for an arbitrary generator; no carrier check.
Mat3 propagate_unitary(const Generator& gen, double t0, double t1, double dt_max,
                       Integrator integrator = Integrator::kMagnus4);

/// Schrödinger evolution of psi0 (given at grid.front()) sampled at grid.
TimeSeries propagate_state(const LadderSystem& sys, const DriveSpec& d, const PureState& psi0,
                           std::span<const double> grid, const PropagationOptions& opts = {});

TimeSeries propagate_state(const Generator& gen, const PureState& psi0,
                           std::span<const double> grid, double dt_max,
                           Integrator integrator = Integrator::kMagnus4,
                           bool keep_amplitudes = false);

/// Final amplitudes after propagating psi0 across the default window.
Vec3 final_amplitudes(const LadderSystem& sys, const DriveSpec& d, const PureState& psi0,
                      const PropagationOptions& opts = {});

/// Lindblad evolution with the radiative cascade L1 = √γ_bx|X><BX|,
/// L2 = √γ_x|0><X|. Symmetric splitting: unitary half step, exact
/// dissipator over the full step, unitary half step.
TimeSeries propagate_lindblad(const LadderSystem& sys, const DriveSpec& d,
                              const DensityMatrix& rho0, std::span<const double> grid,
                              const PropagationOptions& opts = {});

/// Final density matrix after propagating across the default window.
Mat3 final_density_matrix(const LadderSystem& sys, const DriveSpec& d, const DensityMatrix& rho0,
                          const PropagationOptions& opts = {});

/// Exact action of the cascade dissipator over a time h.
void apply_cascade_decay(Mat3& rho, double gamma_bx, double gamma_x, double h);

/// n equally spaced points over [t0, t1], n >= 2.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// CSV with header t_ps,p_bx,p_x,p_0 (plus re/im amplitude columns when present).
void write_csv(std::ostream& out, const TimeSeries& ts);

}  // namespace ftpe
