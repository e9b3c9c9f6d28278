#pragma once

// Excitation protocols and closed-form reference predictions.

#include <string>
#include <variant>

#include "ftpe/model.hpp"
#include "ftpe/propagator.hpp"

namespace ftpe {

/// STIRAP pulse pair with real envelopes. The pump fills the Ω_p slot of
/// stirap_hamiltonian_at (BX <-> X), the Stokes pulse the Ω_s slot (X <-> 0).
/// Population starts in |0>, so the counterintuitive order (the empty
/// BX <-> X transition driven first) corresponds to delay() < 0.
struct StirapDrive {
  PulseSpec pump;
  PulseSpec stokes;
  double delta_mid = 0.0;  ///< detuning of the middle level, rad/ps

  /// Equal-area pulses with pump centered at +delay/2, Stokes at -delay/2.
  static StirapDrive symmetric(double theta, double s, double delay, double delta_mid);
  double delay() const { return pump.center - stokes.center; }
  bool counterintuitive() const { return delay() < 0.0; }
  void validate() const;
};

TimeWindow default_window(const StirapDrive& d);

enum class ScenarioKind { kTPE, kFTPE, kSTIRAP };

std::string to_string(ScenarioKind kind);

struct Scenario {
  ScenarioKind kind = ScenarioKind::kFTPE;
  LadderSystem sys;
  std::variant<DriveSpec, StirapDrive> drive;
  TimeWindow window;
  std::size_t grid_points = 601;

  /// Degenerate two-photon excitation: a single-color pair (δ = 0, τ = 0).
  static Scenario tpe(const LadderSystem& sys, double theta, double s);
  static Scenario ftpe(const LadderSystem& sys, double theta, double s, double delta, double tau,
                       double phase = 0.0);
  static Scenario stirap(const StirapDrive& drive);

  /// Label/drive consistency: TPE needs δ = 0, FTPE δ != 0, STIRAP a StirapDrive.
  void validate() const;
};

/// Propagates the scenario from |0> on its window and grid.
TimeSeries run_scenario(const Scenario& sc, const PropagationOptions& opts = {});

/// Adiabatic-approximation biexciton occupation for zero delay:
///   sin²(Λ/2),  Λ = (1/4ħ) ∫ [E_B - √(E_B² + 8ħ²Ω²(t))] dt,
/// with Ω(t) = 2f(t)cos(δt) the total drive amplitude.
double tpe_adiabatic_prediction(const LadderSystem& sys, const DriveSpec& d);

/// Final P_BX after a full propagation from |0> (Lindblad if the system has
/// nonzero decay rates).
double final_bx_occupation(const LadderSystem& sys, const DriveSpec& d,
                           const PropagationOptions& opts = {});

struct OptimumResult {
  double theta_opt = 0.0;
  double p_bx_max = 0.0;
};

struct OptimizeOptions {
  int coarse_points = 41;
  double theta_tol = 1e-4;  ///< rad
  PropagationOptions propagation;
};

/// First local maximum of the final P_BX versus pulse area (both pulses set
/// to theta) inside [theta_min, theta_max]: coarse scan, then golden-section
/// refinement. Throws NoMaximumFound if the scan has no interior maximum.
OptimumResult find_optimal_theta(const LadderSystem& sys, const DriveSpec& tmpl, double theta_min,
                                 double theta_max, const OptimizeOptions& opts = {});

/// Polarization correlations in the linear, diagonal and circular bases.
struct CorrelationSet {
  double c_linear = 0.0;
  double c_diagonal = 0.0;
  double c_circular = 0.0;
};

/// Bell-state fidelity (1 + C_lin + C_diag - C_circ)/4, unclamped. Throws
/// OutOfRange when any |C| > 1.
double fidelity_from_correlations(const CorrelationSet& c);

/// ac-Stark fine-structure shift ½(δ_CW - √(δ_CW² + Ω²)); any consistent unit.
double fss_ac_stark(double delta_cw, double omega);

/// STIRAP propagation from |0>; occupations reported in basis {BX, X, 0}
/// (BX is the target).
TimeSeries run_stirap(const StirapDrive& d, const TimeWindow& window, std::size_t grid_points,
                      double dt_max = 0.0);
TimeSeries run_stirap(const StirapDrive& d, std::size_t grid_points = 2, double dt_max = 0.0);

}  // namespace ftpe
