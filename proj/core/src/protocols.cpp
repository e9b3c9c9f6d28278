#include "ftpe/protocols.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ftpe/errors.hpp"
#include "stepper.hpp"

namespace ftpe {

StirapDrive StirapDrive::symmetric(double theta, double s, double delay, double delta_mid) {
  StirapDrive d;
  d.pump = PulseSpec{theta, s, 0.5 * delay, 0.0, 0.0};
  d.stokes = PulseSpec{theta, s, -0.5 * delay, 0.0, 0.0};
  d.delta_mid = delta_mid;
  return d;
}

void StirapDrive::validate() const {
  pump.validate();
  stokes.validate();
  if (pump.detuning != 0.0 || stokes.detuning != 0.0 || pump.phase != 0.0 ||
      stokes.phase != 0.0) {
    throw std::invalid_argument("STIRAP envelopes are real: detuning and phase must be zero");
  }
  if (!std::isfinite(delta_mid)) throw std::invalid_argument("delta_mid must be finite");
}

TimeWindow default_window(const StirapDrive& d) {
  return {std::min(d.pump.center - 8.0 * d.pump.s, d.stokes.center - 8.0 * d.stokes.s),
          std::max(d.pump.center + 8.0 * d.pump.s, d.stokes.center + 8.0 * d.stokes.s)};
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTPE: return "TPE";
    case ScenarioKind::kFTPE: return "FTPE";
    case ScenarioKind::kSTIRAP: return "STIRAP";
  }
  return "?";
}

Scenario Scenario::tpe(const LadderSystem& sys, double theta, double s) {
  Scenario sc;
  sc.kind = ScenarioKind::kTPE;
  sc.sys = sys;
  const DriveSpec d = DriveSpec::symmetric(theta, s, 0.0, 0.0);
  sc.drive = d;
  sc.window = default_window(d);
  return sc;
}

Scenario Scenario::ftpe(const LadderSystem& sys, double theta, double s, double delta, double tau,
                        double phase) {
  Scenario sc;
  sc.kind = ScenarioKind::kFTPE;
  sc.sys = sys;
  const DriveSpec d = DriveSpec::symmetric(theta, s, delta, tau, phase);
  sc.drive = d;
  sc.window = default_window(d);
  return sc;
}

Scenario Scenario::stirap(const StirapDrive& drive) {
  Scenario sc;
  sc.kind = ScenarioKind::kSTIRAP;
  sc.drive = drive;
  sc.window = default_window(drive);
  return sc;
}

void Scenario::validate() const {
  sys.validate();
  if (!(window.t1 > window.t0)) throw std::invalid_argument("scenario window is empty");
  if (grid_points < 2) throw std::invalid_argument("scenario needs at least 2 grid points");
  const bool is_stirap = std::holds_alternative<StirapDrive>(drive);
  if ((kind == ScenarioKind::kSTIRAP) != is_stirap) {
    throw std::invalid_argument("scenario label " + to_string(kind) +
                                " does not match its drive kind");
  }
  if (is_stirap) {
    std::get<StirapDrive>(drive).validate();
    return;
  }
  const DriveSpec& d = std::get<DriveSpec>(drive);
  d.validate();
  if (kind == ScenarioKind::kTPE && d.delta() != 0.0) {
    throw std::invalid_argument("TPE scenario requires zero detuning");
  }
  if (kind == ScenarioKind::kFTPE && d.delta() == 0.0) {
    throw std::invalid_argument("FTPE scenario requires nonzero detuning");
  }
}

TimeSeries run_scenario(const Scenario& sc, const PropagationOptions& opts) {
  sc.validate();
  const auto grid = uniform_grid(sc.window.t0, sc.window.t1, sc.grid_points);
  if (const auto* st = std::get_if<StirapDrive>(&sc.drive)) {
    return run_stirap(*st, sc.window, sc.grid_points, opts.dt_max);
  }
  const DriveSpec& d = std::get<DriveSpec>(sc.drive);
  if (sc.sys.is_closed()) return propagate_state(sc.sys, d, PureState::ground(), grid, opts);
  return propagate_lindblad(sc.sys, d, DensityMatrix::basis(kG), grid, opts);
}

double tpe_adiabatic_prediction(const LadderSystem& sys, const DriveSpec& d) {
  d.validate();
  if (d.delay() != 0.0) {
    throw std::invalid_argument("adiabatic TPE prediction requires zero delay");
  }
  const double eb = sys.e_b / kHbar;  // rad/ps
  auto integrand = [&](double t) {
    const double omega2 = std::norm(drive_value(d, t));
    return eb - std::sqrt(eb * eb + 8.0 * omega2);
  };

  // Fixed 61-point rule on panels no longer than half a carrier period or
  // half an envelope width.
  const TimeWindow w = default_window(d);
  double panel = 0.5 * std::min(d.blue.s, d.red.s);
  if (d.delta() != 0.0) panel = std::min(panel, kPi / std::abs(d.delta()));
  const auto n = static_cast<std::size_t>(std::ceil(w.length() / panel));
  const double h = w.length() / static_cast<double>(n);
  double lambda = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = w.t0 + static_cast<double>(k) * h;
    lambda += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, a + h, 0);
  }
  lambda *= 0.25;
  const double s = std::sin(0.5 * lambda);
  return s * s;
}

double final_bx_occupation(const LadderSystem& sys, const DriveSpec& d,
                           const PropagationOptions& opts) {
  if (sys.is_closed()) return std::norm(final_amplitudes(sys, d, PureState::ground(), opts)(kBX));
  return final_density_matrix(sys, d, DensityMatrix::basis(kG), opts)(kBX, kBX).real();
}

OptimumResult find_optimal_theta(const LadderSystem& sys, const DriveSpec& tmpl, double theta_min,
                                 double theta_max, const OptimizeOptions& opts) {
  if (!(theta_max > theta_min) || theta_min < 0.0) {
    throw std::invalid_argument("theta range must satisfy 0 <= min < max");
  }
  if (opts.coarse_points < 3) throw std::invalid_argument("coarse scan needs >= 3 points");

  auto occupation = [&](double theta) {
    DriveSpec d = tmpl;
    d.blue.theta = theta;
    d.red.theta = theta;
    return final_bx_occupation(sys, d, opts.propagation);
  };

  const int n = opts.coarse_points;
  const double step = (theta_max - theta_min) / (n - 1);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = occupation(theta_min + i * step);

  int peak = -1;
  for (int i = 1; i + 1 < n; ++i) {
    if (p[i] > p[i - 1] && p[i] >= p[i + 1]) {
      peak = i;
      break;
    }
  }
  if (peak < 0) {
    std::ostringstream msg;
    msg << "final P_BX has no interior maximum on [" << theta_min << ", " << theta_max << "] rad";
    throw NoMaximumFound(msg.str());
  }

  // Golden-section search for the maximum inside the bracketing cells.
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = theta_min + (peak - 1) * step;
  double b = theta_min + (peak + 1) * step;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double pc = occupation(c);
  double pe = occupation(e);
  while (b - a > opts.theta_tol) {
    // ">=" keeps the lower half on ties, so the smaller theta wins.
    if (pc >= pe) {
      b = e;
      e = c;
      pe = pc;
      c = b - inv_phi * (b - a);
      pc = occupation(c);
    } else {
      a = c;
      c = e;
      pc = pe;
      e = a + inv_phi * (b - a);
      pe = occupation(e);
    }
  }
  OptimumResult best{pc >= pe ? c : e, std::max(pc, pe)};
  if (p[peak] > best.p_bx_max) best = {theta_min + peak * step, p[peak]};
  return best;
}

double fidelity_from_correlations(const CorrelationSet& c) {
  for (double v : {c.c_linear, c.c_diagonal, c.c_circular}) {
    if (!(std::abs(v) <= 1.0)) {
      std::ostringstream msg;
      msg << "correlation value " << v << " outside [-1, 1]";
      throw OutOfRange(msg.str());
    }
  }
  return (1.0 + c.c_linear + c.c_diagonal - c.c_circular) / 4.0;
}

double fss_ac_stark(double delta_cw, double omega) {
  return 0.5 * (delta_cw - std::sqrt(delta_cw * delta_cw + omega * omega));
}

TimeSeries run_stirap(const StirapDrive& d, const TimeWindow& window, std::size_t grid_points,
                      double dt_max) {
  d.validate();
  const double dt = dt_max > 0.0 ? dt_max : std::min(d.pump.s, d.stokes.s) / 200.0;
  auto gen = [&d](double t) {
    return stirap_hamiltonian_at(envelope_value(d.pump, t), envelope_value(d.stokes, t),
                                 d.delta_mid) /
           kHbar;
  };
  const auto grid = uniform_grid(window.t0, window.t1, grid_points);
  return propagate_state(Generator(gen), PureState::ground(), grid, dt);
}

TimeSeries run_stirap(const StirapDrive& d, std::size_t grid_points, double dt_max) {
  return run_stirap(d, default_window(d), grid_points, dt_max);
}

}  // namespace ftpe
