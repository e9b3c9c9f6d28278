#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftpe_cli/config.hpp"

namespace ftpe::cli {

struct CommandContext {
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  std::ostream* log = nullptr;  ///< progress/summary lines; may be null
};

/// Files written by a command, in order.
using FileList = std::vector<std::filesystem::path>;

/// <prefix>_timeseries.csv
FileList cmd_simulate(const RunConfig& cfg, const CommandContext& ctx);

/// <prefix>_fields.csv, <prefix>_bloch_full.csv, <prefix>_bloch_effective.csv
FileList cmd_fields(const RunConfig& cfg, const CommandContext& ctx);

/// <prefix>_sweep.csv, <prefix>_sweep.json and, if any point failed,
/// <prefix>_sweep_errors.log
FileList cmd_sweep(const RunConfig& cfg, const CommandContext& ctx);

/// <prefix>_compare_<mode>.csv
FileList cmd_compare(const RunConfig& cfg, const CommandContext& ctx);

/// <prefix>_optimum.json
FileList cmd_optimize(const RunConfig& cfg, const CommandContext& ctx);

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitPropagation = 3 };

/// Runs a subcommand by name and maps errors to exit codes, reporting them on
/// `err`. Nothing is written when the config is rejected.
int run_command(const std::string& name, const RunConfig& cfg, const CommandContext& ctx,
                std::ostream& err);

}  // namespace ftpe::cli
