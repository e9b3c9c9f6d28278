#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ftpe/model.hpp"
#include "ftpe/propagator.hpp"

namespace ftpe {

enum class SweepParam { kTheta, kDelta, kTau, kPhase };

std::string to_string(SweepParam p);
/// Accepts "theta", "delta", "tau", "phase"; throws std::invalid_argument.
SweepParam parse_sweep_param(const std::string& name);

/// Display unit conversions used in files: theta in multiples of π, delta in
/// meV, tau in ps, phase in rad.
double to_display_units(SweepParam p, double internal);
double from_display_units(SweepParam p, double display);
std::string display_label(SweepParam p);

/// Linear axis in internal units (rad, rad/ps, ps, rad).
struct SweepAxis {
  SweepParam param = SweepParam::kTheta;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  /// min < max, 2 <= count <= 2048.
  void validate() const;
  double value(int i) const;
  std::vector<double> values() const;
};

/// Sets the swept quantity on a symmetric drive: theta on both pulses,
/// delta as ±δ, tau as centers ±τ/2, phase on the red pulse.
void apply_param(DriveSpec& d, SweepParam p, double value);

struct SweepError {
  int i = 0;
  int j = 0;
  std::string message;
};

struct SweepOptions {
  bool open_system = false;
  unsigned workers = 1;
  PropagationOptions propagation;
};

struct SweepResult {
  SweepAxis axis1;
  SweepAxis axis2;
  std::vector<double> p_bx;  ///< row-major, axis1.count x axis2.count
  std::vector<SweepError> errors;
  LadderSystem sys;
  DriveSpec drive_template;
  SweepOptions options;

  double at(int i, int j) const { return p_bx[static_cast<std::size_t>(i) * axis2.count + j]; }
  std::vector<double> row(int i) const;
  std::vector<double> column(int j) const;
  double max_value() const;
};

/// Final P_BX at every grid point by full propagation from |0>. Points are
/// scheduled in any order across `workers` threads but stored by index, so
/// the output does not depend on the worker count. A failing point becomes
/// NaN and is logged in `errors`.
SweepResult grid_sweep(const LadderSystem& sys, const DriveSpec& tmpl, const SweepAxis& axis1,
                       const SweepAxis& axis2, const SweepOptions& opts = {});

/// One-dimensional variant (a single row).
std::vector<double> line_sweep(const LadderSystem& sys, const DriveSpec& tmpl,
                               const SweepAxis& axis, const SweepOptions& opts = {});

struct RobustnessMetrics {
  double plateau_width = 0.0;  ///< in the units of `thetas`
  double plateau_start = 0.0;
  double plateau_end = 0.0;
  double max_value = 0.0;
};

/// Widest contiguous run of samples with value >= threshold; the width is
/// the distance between its first and last abscissa.
RobustnessMetrics robustness_metrics(std::span<const double> values,
                                     std::span<const double> thetas, double threshold);

/// Matrix CSV: first row = corner label and axis2 values, first column =
/// axis1 values, all in display units.
void write_csv(std::ostream& out, const SweepResult& r);

/// JSON sidecar with every physical and numerical parameter of the sweep.
void write_metadata_json(std::ostream& out, const SweepResult& r);

/// Plain-text error log, one line per failed point.
void write_error_log(std::ostream& out, const SweepResult& r);

}  // namespace ftpe
