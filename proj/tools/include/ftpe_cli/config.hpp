#pragma once

// Run configuration for the ftpe command-line tool. Quantities carry their
// unit in the key name; pulse areas are given in multiples of π.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ftpe/model.hpp"
#include "ftpe/propagator.hpp"
#include "ftpe/floquet.hpp"
#include "ftpe/protocols.hpp"
#include "ftpe/sweep.hpp"

namespace ftpe::cli {

/// Malformed file, unknown key, wrong type or invalid value. Maps to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemConfig {
  double e_b_meV = 2.82;
  double gamma_bx_per_ps = 0.0;
  double gamma_x_per_ps = 0.0;

  bool operator==(const SystemConfig&) const = default;
};

struct DriveConfig {
  double theta_pi_units = 7.7;
  double s_ps = 3.61;
  double delta_meV = 3.75;
  double tau_ps = 0.0;
  double phase_rad = 0.0;

  bool operator==(const DriveConfig&) const = default;
};

struct NumericsConfig {
  double dt_ps = 0.0;               ///< 0 selects the automatic step
  std::string integrator = "magnus4";  ///< magnus4 | midpoint
  int output_points = 601;
  std::string route = "log";        ///< log | magnus
  int steps_per_period = 256;
  int magnus_order = 3;
  int coarse_points = 400;
  int optimize_coarse_points = 41;
  double theta_tol_pi = 1e-5;

  bool operator==(const NumericsConfig&) const = default;
};

struct AxisConfig {
  std::string param = "theta";
  double min = 0.0;  ///< display units: π, meV, ps or rad
  double max = 12.0;
  int count = 121;

  bool operator==(const AxisConfig&) const = default;
};

struct SweepConfig {
  AxisConfig axis1{"theta", 0.0, 12.0, 121};
  AxisConfig axis2{"delta", 0.0, 6.0, 121};
  bool open_system = false;

  bool operator==(const SweepConfig&) const = default;
};

struct OptimizeConfig {
  double theta_min_pi = 0.5;
  double theta_max_pi = 12.0;

  bool operator==(const OptimizeConfig&) const = default;
};

struct CompareConfig {
  std::string mode = "phase";  ///< tpe | stirap | phase
  double theta_min_pi = 0.0;
  double theta_max_pi = 6.0;
  int theta_points = 61;
  int phase_count = 8;
  double stirap_delta_meV = 2.34;
  double stirap_delay_ps = 4.0;  ///< magnitude; both orders are run

  bool operator==(const CompareConfig&) const = default;
};

struct OutputConfig {
  std::string prefix = "ftpe";
  bool amplitudes = false;

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  SystemConfig system;
  DriveConfig drive;
  NumericsConfig numerics;
  SweepConfig sweep;
  OptimizeConfig optimize;
  CompareConfig compare;
  OutputConfig output;

  bool operator==(const RunConfig&) const = default;
};

/// Parses JSON text. Missing keys keep their defaults; unknown keys, wrong
/// types and invalid values throw ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Pretty-printed JSON containing every key.
std::string emit_config(const RunConfig& cfg);

/// Checks every block; throws ConfigError.
void validate(const RunConfig& cfg);

LadderSystem to_system(const RunConfig& cfg);
DriveSpec to_drive(const RunConfig& cfg);
PropagationOptions to_propagation(const RunConfig& cfg);
FieldOptions to_field_options(const RunConfig& cfg);
SweepAxis to_axis(const AxisConfig& a);

}  // namespace ftpe::cli
