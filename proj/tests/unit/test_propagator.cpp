#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "ftpe/errors.hpp"
#include "ftpe/linalg.hpp"
#include "ftpe/propagator.hpp"
#include "ftpe/units.hpp"
#include "oracle.hpp"

using namespace ftpe;

namespace {

const LadderSystem kSys{2.82, 0.0, 0.0};
const double kDelta = to_angular(3.75);

double occupation_sum(const std::array<double, 3>& p) { return p[0] + p[1] + p[2]; }

}  // namespace

TEST_CASE("step count") {
  CHECK(step_count(0.0, 1.0, 0.25) == 4);
  CHECK(step_count(0.0, 1.0, 0.3) == 4);
  CHECK(step_count(0.0, 1.0, 2.0) == 1);
  CHECK(step_count(-1.0, 1.0, 2.0 / 3.0) == 3);
}

TEST_CASE("drive-off propagator is a pure exciton phase") {
  const DriveSpec d = DriveSpec::symmetric(0.0, 3.61, kDelta, 0.0);
  for (auto integ : {Integrator::kMidpoint, Integrator::kMagnus4}) {
    const Mat3 u = propagate_unitary(kSys, d, -10.0, 15.0, 0.01, integ);
    Mat3 expect = Mat3::Identity();
    expect(kX, kX) = std::exp(cplx(0.0, -to_angular(1.41) * 25.0));
    CHECK(max_abs(Mat3(u - expect)) <= 1e-12);
  }
}

TEST_CASE("propagators are unitary") {
  for (double tau : {0.0, -1.5, 3.0}) {
    for (double theta : {kPi, 7.7 * kPi, 12.0 * kPi}) {
      const DriveSpec d = DriveSpec::symmetric(theta, 3.61, kDelta, tau, 0.3);
      const TimeWindow w = default_window(d);
      const Mat3 u = propagate_unitary(kSys, d, w.t0, w.t1, default_dt(d));
      CHECK(unitarity_deviation(u) <= 1e-9);
    }
  }
}

TEST_CASE("unitary and amplitude paths agree") {
  const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, kDelta, 0.0);
  const TimeWindow w = default_window(d);
  const Mat3 u = propagate_unitary(kSys, d, w.t0, w.t1, default_dt(d));
  const Vec3 psi = final_amplitudes(kSys, d, PureState::ground());
  CHECK(std::abs(std::norm(u(kBX, kG)) - std::norm(psi(kBX))) <= 1e-8);
  CHECK((u.col(kG) - psi).norm() <= 1e-10);
}

TEST_CASE("amplitudes agree with an RK4 reference") {
  oracle::Drive o;
  o.theta = 8.3 * kPi;
  o.delta = kDelta;
  o.tau = -1.5;
  o.phase = 0.7;
  const DriveSpec d = DriveSpec::symmetric(o.theta, o.s, o.delta, o.tau, o.phase);
  const TimeWindow w = default_window(d);
  const Eigen::Vector3cd ref = oracle::ladder_final(o, oracle::ground(), w.t0, w.t1, 60000);

  const Vec3 magnus = final_amplitudes(kSys, d, PureState::ground());
  CHECK((magnus - ref).norm() <= 1e-6);

  PropagationOptions mid;
  mid.integrator = Integrator::kMidpoint;
  mid.dt_max = 0.002;
  const Vec3 midpoint = final_amplitudes(kSys, d, PureState::ground(), mid);
  CHECK((midpoint - ref).norm() <= 1e-4);
}

TEST_CASE("step halving at the default step") {
  for (double tau : {0.0, -1.5}) {
    const DriveSpec d = DriveSpec::symmetric(8.0 * kPi, 3.61, kDelta, tau);
    PropagationOptions coarse, fine;
    coarse.dt_max = default_dt(d);
    fine.dt_max = 0.5 * default_dt(d);
    const Vec3 a = final_amplitudes(kSys, d, PureState::ground(), coarse);
    const Vec3 b = final_amplitudes(kSys, d, PureState::ground(), fine);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(std::norm(a(k)) - std::norm(b(k))) <= 1e-7);
  }
}

TEST_CASE("midpoint integrator converges at second order") {
  const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, kDelta, 0.0);
  const TimeWindow w = default_window(d);
  const Mat3 ref = propagate_unitary(kSys, d, w.t0, w.t1, 0.0025, Integrator::kMagnus4);
  const double e1 = max_abs(Mat3(propagate_unitary(kSys, d, w.t0, w.t1, 0.01, Integrator::kMidpoint) - ref));
  const double e2 = max_abs(Mat3(propagate_unitary(kSys, d, w.t0, w.t1, 0.005, Integrator::kMidpoint) - ref));
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("propagator composition") {
  const DriveSpec d = DriveSpec::symmetric(8.3 * kPi, 3.61, kDelta, -1.5);
  const double dt = 0.01;
  const Mat3 u20 = propagate_unitary(kSys, d, -20.0, 20.0, dt);
  const Mat3 u10 = propagate_unitary(kSys, d, -20.0, 0.5, dt);
  const Mat3 u21 = propagate_unitary(kSys, d, 0.5, 20.0, dt);
  CHECK(max_abs(Mat3(u20 - u21 * u10)) <= 1e-9);
}

TEST_CASE("carrier aliasing is rejected") {
  const DriveSpec d = DriveSpec::symmetric(kPi, 3.61, kDelta, 0.0);
  CHECK_THROWS_AS(propagate_unitary(kSys, d, 0.0, 1.0, 1.01 * max_allowed_dt(d)), StepTooLarge);
  CHECK_NOTHROW(propagate_unitary(kSys, d, 0.0, 1.0, max_allowed_dt(d)));
  PropagationOptions opts;
  opts.dt_max = 2.0 * max_allowed_dt(d);
  CHECK_THROWS_AS(final_amplitudes(kSys, d, PureState::ground(), opts), StepTooLarge);
}

TEST_CASE("state propagation") {
  SUBCASE("drive off keeps the ground state") {
    const DriveSpec d = DriveSpec::symmetric(0.0, 3.61, kDelta, 0.0);
    const TimeWindow w = default_window(d);
    const auto grid = uniform_grid(w.t0, w.t1, 101);
    const TimeSeries ts = propagate_state(kSys, d, PureState::ground(), grid);
    REQUIRE(ts.size() == 101);
    for (const auto& p : ts.occupations) CHECK(p[kG] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("norm and occupation sum are conserved") {
    const DriveSpec d = DriveSpec::symmetric(12.0 * kPi, 3.61, kDelta, -1.5, 2.0);
    const TimeWindow w = default_window(d);
    PropagationOptions opts;
    opts.keep_amplitudes = true;
    const TimeSeries ts = propagate_state(kSys, d, PureState::ground(), uniform_grid(w.t0, w.t1, 301), opts);
    REQUIRE(ts.amplitudes.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(occupation_sum(ts.occupations[i]) - 1.0) <= 1e-9);
      CHECK(std::abs(ts.amplitudes[i].norm() - 1.0) <= 1e-9);
    }
    CHECK(ts.times.front() == w.t0);
    CHECK(ts.times.back() == w.t1);
  }
  SUBCASE("resonant TPE shows Rabi oscillation in the pulse area") {
    std::vector<double> p;
    for (int i = 0; i <= 24; ++i) {
      const DriveSpec d = DriveSpec::symmetric(0.25 * i * kPi, 3.61, 0.0, 0.0);
      p.push_back(std::norm(final_amplitudes(kSys, d, PureState::ground())(kBX)));
    }
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] > 0.9) ++maxima;
    }
    CHECK(maxima >= 2);
    CHECK(p.front() == 0.0);
  }
}

TEST_CASE("lindblad evolution") {
  SUBCASE("zero rates reproduce the pure state") {
    const DriveSpec d = DriveSpec::symmetric(8.3 * kPi, 3.61, kDelta, -1.5);
    const TimeWindow w = default_window(d);
    const auto grid = uniform_grid(w.t0, w.t1, 61);
    // the split step is two unitary half steps when nothing decays
    PropagationOptions half;
    half.dt_max = 0.5 * default_dt(d);
    const TimeSeries pure = propagate_state(kSys, d, PureState::ground(), grid, half);
    const TimeSeries mixed = propagate_lindblad(kSys, d, DensityMatrix::basis(kG), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(pure.occupations[i][k] - mixed.occupations[i][k]) <= 1e-12);
      }
    }
  }
  SUBCASE("cascade decay without drive") {
    const LadderSystem sys{2.82, 0.05, 0.02};
    const DriveSpec d = DriveSpec::symmetric(0.0, 3.61, kDelta, 0.0);
    const auto grid = uniform_grid(0.0, 400.0, 41);
    const TimeSeries ts = propagate_lindblad(sys, d, DensityMatrix::basis(kBX), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      const double pbx = std::exp(-0.05 * t);
      const double px = 0.05 / (0.02 - 0.05) * (std::exp(-0.05 * t) - std::exp(-0.02 * t));
      CHECK(std::abs(ts.occupations[i][kBX] - pbx) <= 1e-10);
      CHECK(std::abs(ts.occupations[i][kX] - px) <= 1e-10);
      CHECK(std::abs(occupation_sum(ts.occupations[i]) - 1.0) <= 1e-12);
    }
    CHECK(ts.final_occupations()[kG] > 0.999);
  }
  SUBCASE("equal rates use the degenerate closed form") {
    Mat3 rho = DensityMatrix::basis(kBX).rho;
    apply_cascade_decay(rho, 0.1, 0.1, 3.0);
    CHECK(rho(kX, kX).real() == doctest::Approx(0.1 * 3.0 * std::exp(-0.3)).epsilon(1e-14));
    Mat3 near = DensityMatrix::basis(kBX).rho;
    apply_cascade_decay(near, 0.1, 0.1 * (1.0 + 1e-7), 3.0);
    CHECK(std::abs(near(kX, kX) - rho(kX, kX)) <= 1e-7);
  }
  SUBCASE("coherences decay at the mean rate") {
    Mat3 rho = Mat3::Constant(cplx(1.0 / 3.0, 0.0));
    apply_cascade_decay(rho, 0.2, 0.1, 2.0);
    CHECK(std::abs(rho(kBX, kG) - cplx(std::exp(-0.1 * 2.0) / 3.0, 0.0)) <= 1e-15);
    CHECK(std::abs(rho(kBX, kX) - cplx(std::exp(-0.15 * 2.0) / 3.0, 0.0)) <= 1e-15);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("driven open system keeps trace and positivity") {
    const LadderSystem sys{2.82, 1.0 / 250.0, 1.0 / 250.0};
    const DriveSpec d = DriveSpec::symmetric(8.3 * kPi, 3.61, kDelta, -1.5);
    const Mat3 rho = final_density_matrix(sys, d, DensityMatrix::basis(kG));
    DensityMatrix dm{rho};
    CHECK(std::abs(dm.trace() - 1.0) <= 1e-8);
    CHECK(dm.min_eigenvalue() >= -1e-8);
    CHECK(hermiticity_deviation(rho) <= 1e-10);

    const double closed = std::norm(final_amplitudes(kSys, d, PureState::ground())(kBX));
    const double open = rho(kBX, kBX).real();
    CHECK(open < closed);
    CHECK(open > closed - 0.25);

    PropagationOptions fine;
    fine.dt_max = 0.25 * default_dt(d);
    const double ref = final_density_matrix(sys, d, DensityMatrix::basis(kG), fine)(kBX, kBX).real();
    CHECK(std::abs(open - ref) <= 1e-6);
  }
}

TEST_CASE("time series csv") {
  const DriveSpec d = DriveSpec::symmetric(kPi, 3.61, kDelta, 0.0);
  const TimeWindow w = default_window(d);
  PropagationOptions opts;
  std::ostringstream plain;
  write_csv(plain, propagate_state(kSys, d, PureState::ground(), uniform_grid(w.t0, w.t1, 5), opts));
  std::istringstream in(plain.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_ps,p_bx,p_x,p_0");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  CHECK(plain.str().find('\r') == std::string::npos);

  opts.keep_amplitudes = true;
  std::ostringstream full;
  write_csv(full, propagate_state(kSys, d, PureState::ground(), uniform_grid(w.t0, w.t1, 5), opts));
  CHECK(full.str().rfind("t_ps,p_bx,p_x,p_0,re_bx,im_bx,re_x,im_x,re_0,im_0\n", 0) == 0);
}
