#include "ftpe_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include <json.hpp>

#include "ftpe/csv.hpp"
#include "ftpe/errors.hpp"
#include "ftpe/units.hpp"

namespace ftpe::cli {

namespace {

std::filesystem::path output_path(const RunConfig& cfg, const CommandContext& ctx,
                                  const std::string& suffix) {
  return ctx.out_dir / (cfg.output.prefix + suffix);
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void note(const CommandContext& ctx, const std::string& line) {
  if (ctx.log) *ctx.log << line << '\n';
}

LadderSystem closed(LadderSystem sys) {
  sys.gamma_bx = 0.0;
  sys.gamma_x = 0.0;
  return sys;
}

SweepAxis theta_axis(const CompareConfig& c) {
  SweepAxis a;
  a.param = SweepParam::kTheta;
  a.min = c.theta_min_pi * kPi;
  a.max = c.theta_max_pi * kPi;
  a.count = c.theta_points;
  return a;
}

}  // namespace

FileList cmd_simulate(const RunConfig& cfg, const CommandContext& ctx) {
  const LadderSystem sys = to_system(cfg);
  const DriveSpec d = to_drive(cfg);
  const TimeWindow w = default_window(d);
  const auto grid = uniform_grid(w.t0, w.t1, static_cast<std::size_t>(cfg.numerics.output_points));
  PropagationOptions opts = to_propagation(cfg);

  TimeSeries ts;
  if (sys.is_closed()) {
    ts = propagate_state(sys, d, PureState::ground(), grid, opts);
  } else {
    opts.keep_amplitudes = false;
    ts = propagate_lindblad(sys, d, DensityMatrix::basis(kG), grid, opts);
  }

  const auto path = output_path(cfg, ctx, "_timeseries.csv");
  write_file(path, [&](std::ostream& out) { write_csv(out, ts); });
  const auto& p = ts.final_occupations();
  note(ctx, "final P_BX=" + csv::format(p[kBX]) + " P_X=" + csv::format(p[kX]) +
                " P_0=" + csv::format(p[kG]));
  return {path};
}

FileList cmd_fields(const RunConfig& cfg, const CommandContext& ctx) {
  const LadderSystem sys = closed(to_system(cfg));
  const DriveSpec d = to_drive(cfg);
  const auto grid = coarse_grid(d, static_cast<std::size_t>(cfg.numerics.coarse_points));

  const EffectiveField eff = effective_fields(sys, d, grid, to_field_options(cfg));
  for (const auto& w : eff.warnings) note(ctx, "warning: " + w);

  PropagationOptions opts = to_propagation(cfg);
  opts.keep_amplitudes = true;
  const TimeSeries full = propagate_state(sys, d, PureState::ground(), grid, opts);
  const BlochTrajectory bloch_full = bloch_from_amplitudes(full);
  const BlochTrajectory bloch_eff = propagate_effective(densify(eff), Vec2(0.0, 1.0));

  const FileList files = {output_path(cfg, ctx, "_fields.csv"),
                          output_path(cfg, ctx, "_bloch_full.csv"),
                          output_path(cfg, ctx, "_bloch_effective.csv")};
  write_file(files[0], [&](std::ostream& out) { write_csv(out, eff); });
  write_file(files[1], [&](std::ostream& out) { write_csv(out, bloch_full); });
  write_file(files[2], [&](std::ostream& out) { write_csv(out, bloch_eff); });

  const double p_eff = 0.5 * (1.0 + bloch_eff.sz.back());
  note(ctx, "final P_BX full=" + csv::format(full.final_bx()) + " effective=" +
                csv::format(p_eff));
  return files;
}

FileList cmd_sweep(const RunConfig& cfg, const CommandContext& ctx) {
  SweepOptions opts;
  opts.open_system = cfg.sweep.open_system;
  opts.workers = ctx.workers;
  opts.propagation = to_propagation(cfg);
  opts.propagation.keep_amplitudes = false;

  const SweepResult r = grid_sweep(to_system(cfg), to_drive(cfg), to_axis(cfg.sweep.axis1),
                                   to_axis(cfg.sweep.axis2), opts);

  FileList files = {output_path(cfg, ctx, "_sweep.csv"), output_path(cfg, ctx, "_sweep.json")};
  write_file(files[0], [&](std::ostream& out) { write_csv(out, r); });
  write_file(files[1], [&](std::ostream& out) { write_metadata_json(out, r); });
  if (!r.errors.empty()) {
    files.push_back(output_path(cfg, ctx, "_sweep_errors.log"));
    write_file(files.back(), [&](std::ostream& out) { write_error_log(out, r); });
    note(ctx, std::to_string(r.errors.size()) + " grid points failed; see " +
                  files.back().string());
  }
  note(ctx, "max P_BX=" + csv::format(r.max_value()));
  return files;
}

FileList cmd_compare(const RunConfig& cfg, const CommandContext& ctx) {
  const auto& c = cfg.compare;
  const LadderSystem sys = closed(to_system(cfg));
  DriveSpec tmpl = to_drive(cfg);
  PropagationOptions prop = to_propagation(cfg);
  prop.keep_amplitudes = false;
  const auto path = output_path(cfg, ctx, "_compare_" + c.mode + ".csv");

  SweepOptions opts;
  opts.workers = ctx.workers;
  opts.propagation = prop;

  if (c.mode == "tpe") {
    if (cfg.drive.tau_ps != 0.0) throw ConfigError("'compare.mode' tpe requires drive.tau_ps = 0");
    const SweepAxis axis = theta_axis(c);
    const auto full = line_sweep(sys, tmpl, axis, opts);
    std::vector<double> adiabatic(full.size());
    double worst = 0.0;
    for (int i = 0; i < axis.count; ++i) {
      DriveSpec d = tmpl;
      apply_param(d, SweepParam::kTheta, axis.value(i));
      adiabatic[i] = tpe_adiabatic_prediction(sys, d);
      worst = std::max(worst, std::abs(full[i] - adiabatic[i]));
    }
    write_file(path, [&](std::ostream& out) {
      csv::write_header(out, {"theta_pi", "p_bx_full", "p_bx_adiabatic", "abs_diff"});
      for (int i = 0; i < axis.count; ++i) {
        csv::write_row(out, {axis.value(i) / kPi, full[i], adiabatic[i],
                             std::abs(full[i] - adiabatic[i])});
      }
    });
    note(ctx, "max |full - adiabatic| = " + csv::format(worst));
  } else if (c.mode == "phase") {
    SweepAxis axis;
    axis.param = SweepParam::kPhase;
    axis.min = 0.0;
    axis.max = 2.0 * kPi * (c.phase_count - 1) / c.phase_count;
    axis.count = c.phase_count;
    const auto p = line_sweep(sys, tmpl, axis, opts);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    write_file(path, [&](std::ostream& out) {
      csv::write_header(out, {"phase_rad", "p_bx"});
      for (int i = 0; i < axis.count; ++i) csv::write_row(out, {axis.value(i), p[i]});
    });
    note(ctx, "P_BX spread over phase = " + csv::format(*hi - *lo));
  } else {
    const SweepAxis axis = theta_axis(c);
    const double delta_mid = to_angular(c.stirap_delta_meV);
    std::vector<double> counter(axis.count), intuitive(axis.count);
    for (int i = 0; i < axis.count; ++i) {
      const double th = axis.value(i);
      counter[i] = run_stirap(StirapDrive::symmetric(th, cfg.drive.s_ps, -c.stirap_delay_ps,
                                                     delta_mid),
                              2, prop.dt_max)
                       .final_bx();
      intuitive[i] = run_stirap(StirapDrive::symmetric(th, cfg.drive.s_ps, c.stirap_delay_ps,
                                                       delta_mid),
                                2, prop.dt_max)
                         .final_bx();
    }
    write_file(path, [&](std::ostream& out) {
      csv::write_header(out, {"theta_pi", "p_counterintuitive", "p_intuitive"});
      for (int i = 0; i < axis.count; ++i) {
        csv::write_row(out, {axis.value(i) / kPi, counter[i], intuitive[i]});
      }
    });
    note(ctx, "max transfer counterintuitive=" +
                  csv::format(*std::max_element(counter.begin(), counter.end())) +
                  " intuitive=" +
                  csv::format(*std::max_element(intuitive.begin(), intuitive.end())));
  }
  return {path};
}

FileList cmd_optimize(const RunConfig& cfg, const CommandContext& ctx) {
  OptimizeOptions opts;
  opts.coarse_points = cfg.numerics.optimize_coarse_points;
  opts.theta_tol = cfg.numerics.theta_tol_pi * kPi;
  opts.propagation = to_propagation(cfg);
  opts.propagation.keep_amplitudes = false;

  const OptimumResult r =
      find_optimal_theta(to_system(cfg), to_drive(cfg), cfg.optimize.theta_min_pi * kPi,
                         cfg.optimize.theta_max_pi * kPi, opts);

  nlohmann::ordered_json j = {
      {"theta_opt_pi", r.theta_opt / kPi},
      {"p_bx_max", r.p_bx_max},
      {"delta_meV", cfg.drive.delta_meV},
      {"tau_ps", cfg.drive.tau_ps},
      {"s_ps", cfg.drive.s_ps},
      {"e_b_meV", cfg.system.e_b_meV},
  };
  const auto path = output_path(cfg, ctx, "_optimum.json");
  write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  note(ctx, "theta_opt=" + csv::format(r.theta_opt / kPi) + " pi  P_BX=" +
                csv::format(r.p_bx_max));
  return {path};
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandContext& ctx,
                std::ostream& err) {
  using Fn = FileList (*)(const RunConfig&, const CommandContext&);
  Fn fn = nullptr;
  if (name == "simulate") fn = cmd_simulate;
  else if (name == "fields") fn = cmd_fields;
  else if (name == "sweep") fn = cmd_sweep;
  else if (name == "compare") fn = cmd_compare;
  else if (name == "optimize") fn = cmd_optimize;
  if (!fn) {
    err << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  }
  try {
    validate(cfg);
    fn(cfg, ctx);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "propagation error: " << e.what() << '\n';
    return kExitPropagation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ftpe::cli
