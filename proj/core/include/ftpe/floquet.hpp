#pragma once

// Stroboscopic (Floquet) description of the dichromatic drive: one-period
// Hamiltonians from the matrix logarithm and from the Magnus series, the
// Schrieffer-Wolff reduction to the {BX, 0} two-level model, effective
// fields and Bloch trajectories.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ftpe/model.hpp"
#include "ftpe/propagator.hpp"

namespace ftpe {

/// Drive with envelopes frozen at a coarse time:
///   Ω(t') = f_minus e^{i(phase_minus - δt')} + f_plus e^{i(δt' + phase_plus)}.
struct FrozenDrive {
  double f_minus = 0.0;  ///< envelope of the e^{-iδt} (blue) component, rad/ps
  double f_plus = 0.0;   ///< envelope of the e^{+iδt} (red) component, rad/ps
  double delta = 0.0;    ///< rad/ps, must be nonzero
  double phase_minus = 0.0;
  double phase_plus = 0.0;

  /// T = 2π/|δ|; throws std::invalid_argument for δ = 0.
  double period() const;
  cplx omega(double t) const;
  /// Frozen drive of `d` at coarse time t.
  static FrozenDrive at(const DriveSpec& d, double t);
};

/// H(t')/ħ of the frozen drive (rad/ps).
Mat3 frozen_generator(const LadderSystem& sys, const FrozenDrive& fd, double t);

/// One-period propagator U(T, 0) of the frozen drive.
Mat3 period_propagator(const LadderSystem& sys, const FrozenDrive& fd, int steps_per_period = 256);

/// H̄ = (iħ/T) log U(T) on the principal branch (meV). Throws BranchAmbiguity
/// when an eigenphase of U(T) is within 1e-6 of ±π.
Mat3 stroboscopic_from_log(const LadderSystem& sys, const FrozenDrive& fd,
                           int steps_per_period = 256);

/// Gauss-Legendre node counts per integration dimension for each Magnus order.
struct MagnusNodes {
  int order0 = 64;
  int order1 = 64;
  int order2 = 32;
  int order3 = 16;
};

/// Magnus terms H̄^(0) .. H̄^(max_order) (meV) over one period [0, T],
/// evaluated by iterated Gauss-Legendre quadrature on the time-ordered
/// simplex. max_order <= 3.
std::vector<Mat3> magnus_terms(const LadderSystem& sys, const FrozenDrive& fd, int max_order,
                               const MagnusNodes& nodes = {});

/// Sum of magnus_terms up to max_order.
Mat3 magnus_sum(const LadderSystem& sys, const FrozenDrive& fd, int max_order,
                const MagnusNodes& nodes = {});

/// Closed-form H̄^(0) + H̄^(2) for equal frozen envelopes f (zero delay):
///   H̄^(0) = diag(0, E_B/2, 0)
///   H̄^(2) = E_B f/(4ħδ²) [ħf M1 - E_B M2]
/// with M1 = [[1,0,1],[0,-2,0],[1,0,1]], M2 = [[0,1,0],[1,0,1],[0,1,0]].
Mat3 magnus_tau0_analytic(const LadderSystem& sys, double f, double delta);

/// Second-order Schrieffer-Wolff elimination of the exciton. Returns the 2x2
/// effective Hamiltonian in basis {BX, 0} (meV). Throws DegenerateDenominator
/// when |E_b| < 1e-9 meV.
Mat2 schrieffer_wolff_reduce(const Mat3& hbar, const LadderSystem& sys);

/// max(|H̄_{BX,X}|, |H̄_{0,X}|) / |E_b/2|; the reduction is perturbative for
/// values well below 0.5.
double sw_coupling_ratio(const Mat3& hbar, const LadderSystem& sys);

struct EffectiveField {
  std::vector<double> times;
  std::vector<double> bx, by, bz;  ///< rad/ps
  std::vector<std::string> warnings;

  std::size_t size() const { return times.size(); }
  double max_abs_bx() const;
  double max_abs_by() const;
  double max_abs_bz() const;
};

enum class FieldRoute { kLog, kMagnus };

struct FieldOptions {
  FieldRoute route = FieldRoute::kLog;
  int steps_per_period = 256;
  int magnus_order = 3;
};

/// Reduced fields from the 2x2 effective Hamiltonian:
///   B_x = 2 Re H_{BX,0}/ħ, B_y = -2 Im H_{BX,0}/ħ, B_z = (H_{BX,BX} - H_{0,0})/ħ.
void fields_from_effective(const Mat2& heff, double& bx, double& by, double& bz);

/// Freezes the envelopes at every grid time, extracts H̄ by the selected
/// route and reduces it. Errors carry the offending coarse time.
EffectiveField effective_fields(const LadderSystem& sys, const DriveSpec& d,
                                std::span<const double> grid, const FieldOptions& opts = {});

/// Default coarse grid: `points` samples across default_window(d).
std::vector<double> coarse_grid(const DriveSpec& d, std::size_t points = 400);

/// Bloch vector; north pole (sz = +1) is |BX>, south pole is |0>.
struct BlochTrajectory {
  std::vector<double> times;
  std::vector<double> sx, sy, sz;

  std::size_t size() const { return times.size(); }
};

/// Linearly interpolates the field so that Δt·|B| <= max_angle on every
/// interval.
EffectiveField densify(const EffectiveField& eff, double max_angle = 0.05);

/// Integrates iħ dψ/dt = (ħ/2) B(t)·σ ψ on the samples of `eff`, with B
/// averaged over each interval. psi0 is in basis {BX, 0}. Throws
/// StepTooLarge if some interval has Δt·|B| > 0.05.
BlochTrajectory propagate_effective(const EffectiveField& eff, const Vec2& psi0);

/// Bloch vector of the {BX, 0} components of a full three-level trajectory
/// (requires amplitudes). Components are not renormalized, so the length
/// drops below 1 while the exciton is populated.
BlochTrajectory bloch_from_amplitudes(const TimeSeries& ts);

/// Leading-order effective pulse area for zero delay and zero phase:
///   Λ = E_B/(8√π ħ δ² s) (1 - E_B²/(2ħ²δ²)) Θ².
double effective_pulse_area(const LadderSystem& sys, const DriveSpec& d);

/// sin²(Λ)
double predicted_bx_occupation(const LadderSystem& sys, const DriveSpec& d);

void write_csv(std::ostream& out, const EffectiveField& eff);
void write_csv(std::ostream& out, const BlochTrajectory& traj);

}  // namespace ftpe
