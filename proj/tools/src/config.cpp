#include "ftpe_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ftpe/units.hpp"

namespace ftpe::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads the keys of one JSON object into fields and rejects the rest.
class Section {
 public:
  Section(const json& parent, const std::string& name) : path_(name) {
    auto it = parent.find(name);
    if (it == parent.end()) return;
    if (!it->is_object()) throw ConfigError(name + ": expected an object");
    obj_ = &*it;
  }
  Section(const json& obj, std::string path, bool) : obj_(&obj), path_(std::move(path)) {
    if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  void read(const char* key, double& dst) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "a number");
      dst = v->get<double>();
      if (!std::isfinite(dst)) fail(key, "a finite number");
    }
  }
  void read(const char* key, int& dst) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "an integer");
      dst = v->get<int>();
    }
  }
  void read(const char* key, bool& dst) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "true or false");
      dst = v->get<bool>();
    }
  }
  void read(const char* key, std::string& dst) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "a string");
      dst = v->get<std::string>();
    }
  }
  const json* child(const char* key) {
    const json* v = find(key);
    if (v && !v->is_object()) fail(key, "an object");
    return v;
  }
  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    if (!obj_) return;
    for (const auto& item : obj_->items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + path_ + "." + item.key() + "'");
    }
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError("'" + path_ + "." + key + "': expected " + what);
  }

  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

void read_axis(Section& parent, const char* key, AxisConfig& a) {
  const json* obj = parent.child(key);
  if (!obj) return;
  Section s(*obj, parent.path(key), true);
  s.read("param", a.param);
  s.read("min", a.min);
  s.read("max", a.max);
  s.read("count", a.count);
  s.finish();
}

ordered_json axis_json(const AxisConfig& a) {
  return {{"param", a.param}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  static const std::set<std::string> sections = {"system",   "drive",   "numerics", "sweep",
                                                 "optimize", "compare", "output"};
  for (const auto& item : root.items()) {
    if (!sections.count(item.key())) throw ConfigError("unknown key '" + item.key() + "'");
  }

  RunConfig cfg;
  {
    Section s(root, "system");
    s.read("e_b_meV", cfg.system.e_b_meV);
    s.read("gamma_bx_per_ps", cfg.system.gamma_bx_per_ps);
    s.read("gamma_x_per_ps", cfg.system.gamma_x_per_ps);
    s.finish();
  }
  {
    Section s(root, "drive");
    s.read("theta_pi_units", cfg.drive.theta_pi_units);
    s.read("s_ps", cfg.drive.s_ps);
    s.read("delta_meV", cfg.drive.delta_meV);
    s.read("tau_ps", cfg.drive.tau_ps);
    s.read("phase_rad", cfg.drive.phase_rad);
    s.finish();
  }
  {
    Section s(root, "numerics");
    auto& n = cfg.numerics;
    s.read("dt_ps", n.dt_ps);
    s.read("integrator", n.integrator);
    s.read("output_points", n.output_points);
    s.read("route", n.route);
    s.read("steps_per_period", n.steps_per_period);
    s.read("magnus_order", n.magnus_order);
    s.read("coarse_points", n.coarse_points);
    s.read("optimize_coarse_points", n.optimize_coarse_points);
    s.read("theta_tol_pi", n.theta_tol_pi);
    s.finish();
  }
  {
    Section s(root, "sweep");
    read_axis(s, "axis1", cfg.sweep.axis1);
    read_axis(s, "axis2", cfg.sweep.axis2);
    s.read("open_system", cfg.sweep.open_system);
    s.finish();
  }
  {
    Section s(root, "optimize");
    s.read("theta_min_pi", cfg.optimize.theta_min_pi);
    s.read("theta_max_pi", cfg.optimize.theta_max_pi);
    s.finish();
  }
  {
    Section s(root, "compare");
    auto& c = cfg.compare;
    s.read("mode", c.mode);
    s.read("theta_min_pi", c.theta_min_pi);
    s.read("theta_max_pi", c.theta_max_pi);
    s.read("theta_points", c.theta_points);
    s.read("phase_count", c.phase_count);
    s.read("stirap_delta_meV", c.stirap_delta_meV);
    s.read("stirap_delay_ps", c.stirap_delay_ps);
    s.finish();
  }
  {
    Section s(root, "output");
    s.read("prefix", cfg.output.prefix);
    s.read("amplitudes", cfg.output.amplitudes);
    s.finish();
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
  const auto& n = cfg.numerics;
  const auto& c = cfg.compare;
  ordered_json j = {
      {"system",
       {{"e_b_meV", cfg.system.e_b_meV},
        {"gamma_bx_per_ps", cfg.system.gamma_bx_per_ps},
        {"gamma_x_per_ps", cfg.system.gamma_x_per_ps}}},
      {"drive",
       {{"theta_pi_units", cfg.drive.theta_pi_units},
        {"s_ps", cfg.drive.s_ps},
        {"delta_meV", cfg.drive.delta_meV},
        {"tau_ps", cfg.drive.tau_ps},
        {"phase_rad", cfg.drive.phase_rad}}},
      {"numerics",
       {{"dt_ps", n.dt_ps},
        {"integrator", n.integrator},
        {"output_points", n.output_points},
        {"route", n.route},
        {"steps_per_period", n.steps_per_period},
        {"magnus_order", n.magnus_order},
        {"coarse_points", n.coarse_points},
        {"optimize_coarse_points", n.optimize_coarse_points},
        {"theta_tol_pi", n.theta_tol_pi}}},
      {"sweep",
       {{"axis1", axis_json(cfg.sweep.axis1)},
        {"axis2", axis_json(cfg.sweep.axis2)},
        {"open_system", cfg.sweep.open_system}}},
      {"optimize",
       {{"theta_min_pi", cfg.optimize.theta_min_pi}, {"theta_max_pi", cfg.optimize.theta_max_pi}}},
      {"compare",
       {{"mode", c.mode},
        {"theta_min_pi", c.theta_min_pi},
        {"theta_max_pi", c.theta_max_pi},
        {"theta_points", c.theta_points},
        {"phase_count", c.phase_count},
        {"stirap_delta_meV", c.stirap_delta_meV},
        {"stirap_delay_ps", c.stirap_delay_ps}}},
      {"output", {{"prefix", cfg.output.prefix}, {"amplitudes", cfg.output.amplitudes}}},
  };
  return j.dump(2) + "\n";
}

void validate(const RunConfig& cfg) {
  const auto& sys = cfg.system;
  require(sys.gamma_bx_per_ps >= 0.0, "'system.gamma_bx_per_ps' must be >= 0");
  require(sys.gamma_x_per_ps >= 0.0, "'system.gamma_x_per_ps' must be >= 0");

  const auto& d = cfg.drive;
  require(d.theta_pi_units >= 0.0, "'drive.theta_pi_units' must be >= 0");
  require(d.s_ps > 0.0, "'drive.s_ps' must be > 0");

  const auto& n = cfg.numerics;
  require(n.dt_ps >= 0.0, "'numerics.dt_ps' must be >= 0");
  require(n.integrator == "magnus4" || n.integrator == "midpoint",
          "'numerics.integrator' must be 'magnus4' or 'midpoint'");
  require(n.output_points >= 2, "'numerics.output_points' must be >= 2");
  require(n.route == "log" || n.route == "magnus", "'numerics.route' must be 'log' or 'magnus'");
  require(n.steps_per_period >= 8, "'numerics.steps_per_period' must be >= 8");
  require(n.magnus_order >= 0 && n.magnus_order <= 3, "'numerics.magnus_order' must be in 0..3");
  require(n.coarse_points >= 2, "'numerics.coarse_points' must be >= 2");
  require(n.optimize_coarse_points >= 3, "'numerics.optimize_coarse_points' must be >= 3");
  require(n.theta_tol_pi > 0.0, "'numerics.theta_tol_pi' must be > 0");

  const char* names[] = {"sweep.axis1", "sweep.axis2"};
  const AxisConfig* axes[] = {&cfg.sweep.axis1, &cfg.sweep.axis2};
  for (int k = 0; k < 2; ++k) {
    try {
      to_axis(*axes[k]).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("'" + std::string(names[k]) + "': " + e.what());
    }
  }
  require(cfg.sweep.axis1.param != cfg.sweep.axis2.param,
          "'sweep.axis1.param' and 'sweep.axis2.param' must differ");

  const auto& o = cfg.optimize;
  require(o.theta_min_pi >= 0.0 && o.theta_min_pi < o.theta_max_pi,
          "'optimize' requires 0 <= theta_min_pi < theta_max_pi");

  const auto& c = cfg.compare;
  require(c.mode == "tpe" || c.mode == "stirap" || c.mode == "phase",
          "'compare.mode' must be 'tpe', 'stirap' or 'phase'");
  require(c.theta_min_pi >= 0.0 && c.theta_min_pi < c.theta_max_pi,
          "'compare' requires 0 <= theta_min_pi < theta_max_pi");
  require(c.theta_points >= 2, "'compare.theta_points' must be >= 2");
  require(c.phase_count >= 2, "'compare.phase_count' must be >= 2");
  require(c.stirap_delay_ps > 0.0, "'compare.stirap_delay_ps' must be > 0");

  require(!cfg.output.prefix.empty() &&
              cfg.output.prefix.find_first_of("/\\") == std::string::npos,
          "'output.prefix' must be a non-empty file name");

  try {
    to_system(cfg).validate();
    to_drive(cfg).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

LadderSystem to_system(const RunConfig& cfg) {
  return LadderSystem{cfg.system.e_b_meV, cfg.system.gamma_bx_per_ps, cfg.system.gamma_x_per_ps};
}

DriveSpec to_drive(const RunConfig& cfg) {
  const auto& d = cfg.drive;
  return DriveSpec::symmetric(d.theta_pi_units * kPi, d.s_ps, to_angular(d.delta_meV), d.tau_ps,
                              d.phase_rad);
}

PropagationOptions to_propagation(const RunConfig& cfg) {
  PropagationOptions p;
  p.dt_max = cfg.numerics.dt_ps;
  p.integrator =
      cfg.numerics.integrator == "midpoint" ? Integrator::kMidpoint : Integrator::kMagnus4;
  p.keep_amplitudes = cfg.output.amplitudes;
  return p;
}

FieldOptions to_field_options(const RunConfig& cfg) {
  FieldOptions f;
  f.route = cfg.numerics.route == "magnus" ? FieldRoute::kMagnus : FieldRoute::kLog;
  f.steps_per_period = cfg.numerics.steps_per_period;
  f.magnus_order = cfg.numerics.magnus_order;
  return f;
}

SweepAxis to_axis(const AxisConfig& a) {
  SweepAxis axis;
  axis.param = parse_sweep_param(a.param);
  axis.min = from_display_units(axis.param, a.min);
  axis.max = from_display_units(axis.param, a.max);
  axis.count = a.count;
  return axis;
}

}  // namespace ftpe::cli
