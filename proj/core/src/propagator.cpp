#include "ftpe/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ftpe/csv.hpp"
#include "ftpe/errors.hpp"
#include "stepper.hpp"

namespace ftpe {

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

double resolve_dt(const DriveSpec& d, double dt_max) {
  const double dt = dt_max > 0.0 ? dt_max : default_dt(d);
  const double bound = max_allowed_dt(d);
  if (dt > bound) {
    std::ostringstream msg;
    msg << "step " << dt << " ps exceeds carrier sampling bound " << bound
        << " ps (period/40)";
    throw StepTooLarge(msg.str());
  }
  return dt;
}

std::array<double, 3> occupations_of(const Vec3& psi) {
  return {std::norm(psi(kBX)), std::norm(psi(kX)), std::norm(psi(kG))};
}

std::array<double, 3> occupations_of(const Mat3& rho) {
  return {rho(kBX, kBX).real(), rho(kX, kX).real(), rho(kG, kG).real()};
}

template <class Gen>
TimeSeries state_series(Gen& gen, const PureState& psi0, std::span<const double> grid,
                        double dt_max, Integrator integrator, bool keep_amplitudes) {
  check_grid(grid);
  TimeSeries ts;
  ts.times.assign(grid.begin(), grid.end());
  ts.occupations.reserve(grid.size());
  if (keep_amplitudes) ts.amplitudes.reserve(grid.size());

  Vec3 psi = psi0.amplitudes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) detail::advance_state(gen, psi, grid[i - 1], grid[i], dt_max, integrator);
    ts.occupations.push_back(occupations_of(psi));
    if (keep_amplitudes) ts.amplitudes.push_back(psi);
  }
  return ts;
}

// One split step of the open-system map: U(h/2) · D(h) · U(h/2).
template <class Gen>
void advance_density(Gen& gen, Mat3& rho, double t0, double t1, double dt_max,
                     Integrator integrator, double gamma_bx, double gamma_x) {
  const std::size_t n = step_count(t0, t1, dt_max);
  const double h = (t1 - t0) / static_cast<double>(n);
  detail::StepExponential ex;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    ex.compute(detail::step_generator(gen, t, 0.5 * h, integrator), 0.5 * h);
    Mat3 u = ex.matrix();
    rho = u * rho * u.adjoint();
    apply_cascade_decay(rho, gamma_bx, gamma_x, h);
    ex.compute(detail::step_generator(gen, t + 0.5 * h, 0.5 * h, integrator), 0.5 * h);
    u = ex.matrix();
    rho = u * rho * u.adjoint();
  }
  rho = 0.5 * (rho + rho.adjoint());
}

}  // namespace

PureState PureState::basis(Level level) {
  PureState p;
  p.amplitudes.setZero();
  p.amplitudes(level) = 1.0;
  return p;
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::size_t step_count(double t0, double t1, double dt_max) {
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("propagation requires t1 > t0");
  // The small slack keeps interior points of an equally spaced grid on the grid.
  const double ratio = (t1 - t0) / dt_max;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
}

Mat3 propagate_unitary(const LadderSystem& sys, const DriveSpec& d, double t0, double t1,
                       double dt_max, Integrator integrator) {
  const double dt = resolve_dt(d, dt_max);
  detail::LadderGen gen{d, 0.5 * sys.e_b / kHbar};
  return detail::unitary_over(gen, t0, t1, dt, integrator);
}

Mat3 propagate_unitary(const Generator& gen, double t0, double t1, double dt_max,
                       Integrator integrator) {
  return detail::unitary_over(gen, t0, t1, dt_max, integrator);
}

TimeSeries propagate_state(const LadderSystem& sys, const DriveSpec& d, const PureState& psi0,
                           std::span<const double> grid, const PropagationOptions& opts) {
  const double dt = resolve_dt(d, opts.dt_max);
  detail::LadderGen gen{d, 0.5 * sys.e_b / kHbar};
  return state_series(gen, psi0, grid, dt, opts.integrator, opts.keep_amplitudes);
}

TimeSeries propagate_state(const Generator& gen, const PureState& psi0,
                           std::span<const double> grid, double dt_max, Integrator integrator,
                           bool keep_amplitudes) {
  return state_series(gen, psi0, grid, dt_max, integrator, keep_amplitudes);
}

Vec3 final_amplitudes(const LadderSystem& sys, const DriveSpec& d, const PureState& psi0,
                      const PropagationOptions& opts) {
  const double dt = resolve_dt(d, opts.dt_max);
  const TimeWindow w = default_window(d);
  detail::LadderGen gen{d, 0.5 * sys.e_b / kHbar};
  Vec3 psi = psi0.amplitudes;
  detail::advance_state(gen, psi, w.t0, w.t1, dt, opts.integrator);
  return psi;
}

TimeSeries propagate_lindblad(const LadderSystem& sys, const DriveSpec& d,
                              const DensityMatrix& rho0, std::span<const double> grid,
                              const PropagationOptions& opts) {
  sys.validate();
  check_grid(grid);
  const double dt = resolve_dt(d, opts.dt_max);
  detail::LadderGen gen{d, 0.5 * sys.e_b / kHbar};

  TimeSeries ts;
  ts.times.assign(grid.begin(), grid.end());
  ts.occupations.reserve(grid.size());
  Mat3 rho = rho0.rho;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      advance_density(gen, rho, grid[i - 1], grid[i], dt, opts.integrator, sys.gamma_bx,
                      sys.gamma_x);
    }
    ts.occupations.push_back(occupations_of(rho));
  }
  return ts;
}

Mat3 final_density_matrix(const LadderSystem& sys, const DriveSpec& d, const DensityMatrix& rho0,
                          const PropagationOptions& opts) {
  sys.validate();
  const double dt = resolve_dt(d, opts.dt_max);
  const TimeWindow w = default_window(d);
  detail::LadderGen gen{d, 0.5 * sys.e_b / kHbar};
  Mat3 rho = rho0.rho;
  advance_density(gen, rho, w.t0, w.t1, dt, opts.integrator, sys.gamma_bx, sys.gamma_x);
  return rho;
}

void apply_cascade_decay(Mat3& rho, double gamma_bx, double gamma_x, double h) {
  if (gamma_bx == 0.0 && gamma_x == 0.0) return;
  const double p_bx = rho(kBX, kBX).real();
  const double p_x = rho(kX, kX).real();
  const double p_0 = rho(kG, kG).real();

  const double e_bx = std::exp(-gamma_bx * h);
  const double e_x = std::exp(-gamma_x * h);
  // (e^{-a h} - e^{-b h}) / (b - a), continuous through a = b.
  const double diff = gamma_x - gamma_bx;
  const double feed = (diff == 0.0)
                          ? h * e_bx
                          : e_bx * (-std::expm1(-diff * h)) / diff;

  const double new_bx = p_bx * e_bx;
  const double new_x = p_x * e_x + gamma_bx * p_bx * feed;
  const double new_0 = p_0 + (p_bx - new_bx) + (p_x - new_x);

  const double c_bx_x = std::exp(-0.5 * (gamma_bx + gamma_x) * h);
  const double c_bx_0 = std::exp(-0.5 * gamma_bx * h);
  const double c_x_0 = std::exp(-0.5 * gamma_x * h);

  rho(kBX, kBX) = new_bx;
  rho(kX, kX) = new_x;
  rho(kG, kG) = new_0;
  rho(kBX, kX) *= c_bx_x;
  rho(kX, kBX) *= c_bx_x;
  rho(kBX, kG) *= c_bx_0;
  rho(kG, kBX) *= c_bx_0;
  rho(kX, kG) *= c_x_0;
  rho(kG, kX) *= c_x_0;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
  std::vector<double> g(n);
  const double h = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = t0 + static_cast<double>(i) * h;
  g.back() = t1;
  return g;
}

void write_csv(std::ostream& out, const TimeSeries& ts) {
  const bool amps = !ts.amplitudes.empty();
  if (amps) {
    csv::write_header(out, {"t_ps", "p_bx", "p_x", "p_0", "re_bx", "im_bx", "re_x", "im_x",
                            "re_0", "im_0"});
  } else {
    csv::write_header(out, {"t_ps", "p_bx", "p_x", "p_0"});
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& p = ts.occupations[i];
    if (amps) {
      const Vec3& a = ts.amplitudes[i];
      csv::write_row(out, {ts.times[i], p[0], p[1], p[2], a(0).real(), a(0).imag(), a(1).real(),
                           a(1).imag(), a(2).real(), a(2).imag()});
    } else {
      csv::write_row(out, {ts.times[i], p[0], p[1], p[2]});
    }
  }
}

}  // namespace ftpe
