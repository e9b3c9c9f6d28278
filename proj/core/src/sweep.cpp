#include "ftpe/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ftpe/csv.hpp"
#include "ftpe/protocols.hpp"
#include "json.hpp"

namespace ftpe {

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kTheta: return "theta";
    case SweepParam::kDelta: return "delta";
    case SweepParam::kTau: return "tau";
    case SweepParam::kPhase: return "phase";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "theta") return SweepParam::kTheta;
  if (name == "delta") return SweepParam::kDelta;
  if (name == "tau") return SweepParam::kTau;
  if (name == "phase") return SweepParam::kPhase;
  throw std::invalid_argument("unknown sweep parameter '" + name +
                              "' (expected theta, delta, tau or phase)");
}

double to_display_units(SweepParam p, double internal) {
  switch (p) {
    case SweepParam::kTheta: return internal / kPi;
    case SweepParam::kDelta: return to_energy(internal);
    default: return internal;
  }
}

double from_display_units(SweepParam p, double display) {
  switch (p) {
    case SweepParam::kTheta: return display * kPi;
    case SweepParam::kDelta: return to_angular(display);
    default: return display;
  }
}

std::string display_label(SweepParam p) {
  switch (p) {
    case SweepParam::kTheta: return "theta_pi";
    case SweepParam::kDelta: return "delta_meV";
    case SweepParam::kTau: return "tau_ps";
    case SweepParam::kPhase: return "phase_rad";
  }
  return "?";
}

void SweepAxis::validate() const {
  if (!(min < max)) throw std::invalid_argument("sweep axis " + to_string(param) + ": min < max required");
  if (count < 2 || count > 2048) {
    throw std::invalid_argument("sweep axis " + to_string(param) + ": count must be in [2, 2048]");
  }
}

double SweepAxis::value(int i) const {
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = value(i);
  return v;
}

void apply_param(DriveSpec& d, SweepParam p, double value) {
  switch (p) {
    case SweepParam::kTheta:
      d.blue.theta = value;
      d.red.theta = value;
      break;
    case SweepParam::kDelta:
      d.blue.detuning = value;
      d.red.detuning = -value;
      break;
    case SweepParam::kTau:
      d.blue.center = 0.5 * value;
      d.red.center = -0.5 * value;
      break;
    case SweepParam::kPhase:
      d.red.phase = value;
      break;
  }
}

std::vector<double> SweepResult::row(int i) const {
  auto first = p_bx.begin() + static_cast<std::ptrdiff_t>(i) * axis2.count;
  return {first, first + axis2.count};
}

std::vector<double> SweepResult::column(int j) const {
  std::vector<double> c(axis1.count);
  for (int i = 0; i < axis1.count; ++i) c[i] = at(i, j);
  return c;
}

double SweepResult::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : p_bx) {
    if (!std::isnan(v)) m = std::max(m, v);
  }
  return m;
}

namespace {

double point_occupation(const LadderSystem& sys, const DriveSpec& d, const SweepOptions& opts) {
  if (opts.open_system) {
    return final_density_matrix(sys, d, DensityMatrix::basis(kG), opts.propagation)(kBX, kBX)
        .real();
  }
  return std::norm(final_amplitudes(sys, d, PureState::ground(), opts.propagation)(kBX));
}

// Runs fn(k) for k in [0, n) on `workers` threads with dynamic scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1)) fn(k);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
}

}  // namespace

SweepResult grid_sweep(const LadderSystem& sys, const DriveSpec& tmpl, const SweepAxis& axis1,
                       const SweepAxis& axis2, const SweepOptions& opts) {
  axis1.validate();
  axis2.validate();
  if (axis1.param == axis2.param) {
    throw std::invalid_argument("sweep axes must name distinct parameters");
  }
  sys.validate();

  SweepResult res;
  res.axis1 = axis1;
  res.axis2 = axis2;
  res.sys = sys;
  res.drive_template = tmpl;
  res.options = opts;
  const std::size_t cols = static_cast<std::size_t>(axis2.count);
  const std::size_t total = static_cast<std::size_t>(axis1.count) * cols;
  res.p_bx.assign(total, std::numeric_limits<double>::quiet_NaN());

  std::mutex error_mutex;
  parallel_for(total, opts.workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / cols);
    const int j = static_cast<int>(idx % cols);
    DriveSpec d = tmpl;
    apply_param(d, axis1.param, axis1.value(i));
    apply_param(d, axis2.param, axis2.value(j));
    try {
      d.validate();
      res.p_bx[idx] = point_occupation(sys, d, opts);
    } catch (const std::exception& e) {
      std::lock_guard lock(error_mutex);
      res.errors.push_back({i, j, e.what()});
    }
  });

  std::sort(res.errors.begin(), res.errors.end(), [](const SweepError& a, const SweepError& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  return res;
}

std::vector<double> line_sweep(const LadderSystem& sys, const DriveSpec& tmpl,
                               const SweepAxis& axis, const SweepOptions& opts) {
  axis.validate();
  sys.validate();
  std::vector<double> out(static_cast<std::size_t>(axis.count),
                          std::numeric_limits<double>::quiet_NaN());
  parallel_for(out.size(), opts.workers, [&](std::size_t k) {
    DriveSpec d = tmpl;
    apply_param(d, axis.param, axis.value(static_cast<int>(k)));
    try {
      d.validate();
      out[k] = point_occupation(sys, d, opts);
    } catch (const std::exception&) {
      // left as NaN
    }
  });
  return out;
}

RobustnessMetrics robustness_metrics(std::span<const double> values,
                                     std::span<const double> thetas, double threshold) {
  if (values.size() != thetas.size()) {
    throw std::invalid_argument("robustness_metrics: values and thetas differ in length");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("robustness threshold must lie in (0, 1)");
  }
  RobustnessMetrics m;
  bool found = false;
  bool seen = false;
  std::size_t k = 0;
  while (k < values.size()) {
    if (!std::isnan(values[k])) {
      m.max_value = seen ? std::max(m.max_value, values[k]) : values[k];
      seen = true;
    }
    if (!(values[k] >= threshold)) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < values.size() && values[end + 1] >= threshold) {
      ++end;
      m.max_value = std::max(m.max_value, values[end]);
    }
    const double width = thetas[end] - thetas[k];
    if (!found || width > m.plateau_width) {
      m.plateau_width = width;
      m.plateau_start = thetas[k];
      m.plateau_end = thetas[end];
      found = true;
    }
    k = end + 1;
  }
  return m;
}

void write_csv(std::ostream& out, const SweepResult& r) {
  out << display_label(r.axis1.param) << '\\' << display_label(r.axis2.param);
  for (int j = 0; j < r.axis2.count; ++j) {
    out << ',' << csv::format(to_display_units(r.axis2.param, r.axis2.value(j)));
  }
  out << '\n';
  for (int i = 0; i < r.axis1.count; ++i) {
    out << csv::format(to_display_units(r.axis1.param, r.axis1.value(i)));
    for (int j = 0; j < r.axis2.count; ++j) out << ',' << csv::format(r.at(i, j));
    out << '\n';
  }
}

namespace {

nlohmann::ordered_json axis_json(const SweepAxis& a) {
  nlohmann::ordered_json j;
  j["param"] = to_string(a.param);
  j["unit"] = display_label(a.param);
  j["min"] = to_display_units(a.param, a.min);
  j["max"] = to_display_units(a.param, a.max);
  j["count"] = a.count;
  j["spacing"] = "linear";
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace

void write_metadata_json(std::ostream& out, const SweepResult& r) {
  nlohmann::ordered_json j;
  j["created_utc"] = utc_timestamp();
  j["quantity"] = "final biexciton occupation P_BX";
  j["system"] = {{"e_b_meV", r.sys.e_b},
                 {"gamma_bx_per_ps", r.sys.gamma_bx},
                 {"gamma_x_per_ps", r.sys.gamma_x},
                 {"hbar_meV_ps", kHbar}};
  const DriveSpec& d = r.drive_template;
  j["drive_template"] = {{"theta_pi_units", d.blue.theta / kPi},
                         {"s_ps", d.blue.s},
                         {"delta_meV", to_energy(d.delta())},
                         {"tau_ps", d.delay()},
                         {"phase_rad", d.red.phase}};
  j["axis1"] = axis_json(r.axis1);
  j["axis2"] = axis_json(r.axis2);
  j["numerics"] = {
      {"integrator",
       r.options.propagation.integrator == Integrator::kMagnus4 ? "magnus4" : "midpoint"},
      {"dt_ps", r.options.propagation.dt_max > 0.0 ? nlohmann::ordered_json(r.options.propagation.dt_max)
                                                    : nlohmann::ordered_json("auto: min(s/200, (2pi/delta)/80)")},
      {"window", "[-8s-|tau|/2, 8s+|tau|/2]"},
      {"open_system", r.options.open_system},
      {"initial_state", "ground"}};
  nlohmann::ordered_json errs = nlohmann::ordered_json::array();
  for (const auto& e : r.errors) errs.push_back({{"i", e.i}, {"j", e.j}, {"message", e.message}});
  j["errors"] = errs;
  out << j.dump(2) << '\n';
}

void write_error_log(std::ostream& out, const SweepResult& r) {
  for (const auto& e : r.errors) {
    out << "point (" << e.i << ", " << e.j << ") "
        << display_label(r.axis1.param) << '=' << csv::format(to_display_units(r.axis1.param, r.axis1.value(e.i)))
        << ' ' << display_label(r.axis2.param) << '='
        << csv::format(to_display_units(r.axis2.param, r.axis2.value(e.j))) << ": " << e.message
        << '\n';
  }
}

}  // namespace ftpe
