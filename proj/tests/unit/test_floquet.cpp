#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ftpe/errors.hpp"
#include "ftpe/floquet.hpp"
#include "ftpe/linalg.hpp"
#include "ftpe/units.hpp"
#include "oracle.hpp"

using namespace ftpe;

namespace {

const LadderSystem kSys{2.82, 0.0, 0.0};
const double kDelta = to_angular(3.75);

FrozenDrive frozen(double f_minus, double f_plus, double delta = kDelta) {
  FrozenDrive fd;
  fd.f_minus = f_minus;
  fd.f_plus = f_plus;
  fd.delta = delta;
  return fd;
}

// Peak envelope of one pulse of area theta.
double peak(double theta, double s = 3.61) { return theta / (std::sqrt(2.0 * kPi) * s); }

// One-period propagator from the RK4 reference, column by column.
Mat3 rk4_period(const FrozenDrive& fd) {
  oracle::Drive o;
  o.e_b = kSys.e_b;
  Mat3 u;
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3cd y = Eigen::Vector3cd::Zero();
    y(c) = 1.0;
    auto rhs = [&](double t, const Eigen::Vector3cd& v) {
      const cplx w = fd.f_minus * std::exp(cplx(0.0, fd.phase_minus - fd.delta * t)) +
                     fd.f_plus * std::exp(cplx(0.0, fd.delta * t + fd.phase_plus));
      const cplx mi(0.0, -1.0);
      Eigen::Vector3cd r;
      r(0) = mi * 0.5 * std::conj(w) * v(1);
      r(1) = mi * (0.5 * w * v(0) + 0.5 * to_angular(kSys.e_b) * v(1) + 0.5 * std::conj(w) * v(2));
      r(2) = mi * 0.5 * w * v(1);
      return r;
    };
    u.col(c) = oracle::rk4(rhs, y, 0.0, fd.period(), 4000);
  }
  return u;
}

}  // namespace

TEST_CASE("frozen drive") {
  const DriveSpec d = DriveSpec::symmetric(8.3 * kPi, 3.61, kDelta, -1.5, 0.4);
  const FrozenDrive fd = FrozenDrive::at(d, 2.0);
  CHECK(fd.f_minus == doctest::Approx(envelope_value(d.blue, 2.0)));
  CHECK(fd.f_plus == doctest::Approx(envelope_value(d.red, 2.0)));
  CHECK(fd.phase_plus == 0.4);
  CHECK(fd.period() == doctest::Approx(2.0 * kPi / kDelta));
  for (double t : {0.0, 0.1, 0.33}) {
    const cplx w = fd.f_minus * std::exp(cplx(0.0, -kDelta * t)) +
                   fd.f_plus * std::exp(cplx(0.0, kDelta * t + 0.4));
    CHECK(std::abs(fd.omega(t) - w) <= 1e-14);
  }
  CHECK_THROWS_AS(frozen(1.0, 1.0, 0.0).period(), std::invalid_argument);
}

TEST_CASE("period propagator matches RK4") {
  const FrozenDrive fd = frozen(peak(7.7 * kPi), 0.8 * peak(7.7 * kPi));
  const Mat3 u = period_propagator(kSys, fd);
  CHECK(max_abs(Mat3(u - rk4_period(fd))) <= 1e-9);
  CHECK(unitarity_deviation(u) <= 1e-12);
}

TEST_CASE("stroboscopic hamiltonian from the log") {
  SUBCASE("drive off") {
    const Mat3 h = stroboscopic_from_log(kSys, frozen(0.0, 0.0));
    Mat3 expect = Mat3::Zero();
    expect(kX, kX) = 1.41;
    CHECK(max_abs(Mat3(h - expect)) <= 1e-12);
  }
  SUBCASE("round trip") {
    for (double f : {0.2, 1.0, peak(12.0 * kPi)}) {
      for (double ratio : {1.0, 0.5}) {
        FrozenDrive fd = frozen(f, ratio * f);
        fd.phase_plus = 0.6;
        const Mat3 h = stroboscopic_from_log(kSys, fd);
        CHECK(hermiticity_deviation(h) <= 1e-9);
        const Mat3 u = period_propagator(kSys, fd);
        const Mat3 back = expm_hermitian(Mat3(h / kHbar), fd.period());
        CHECK(max_abs(Mat3(back - u)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("magnus terms") {
  const double f = peak(7.7 * kPi);
  SUBCASE("zeroth order is the time average") {
    for (double ff : {0.0, f, 2.0 * f}) {
      const auto terms = magnus_terms(kSys, frozen(ff, ff), 0);
      Mat3 expect = Mat3::Zero();
      expect(kX, kX) = 1.41;
      CHECK(max_abs(Mat3(terms[0] - expect)) <= 1e-12);
    }
  }
  SUBCASE("first order vanishes for equal envelopes") {
    const auto terms = magnus_terms(kSys, frozen(f, f), 1);
    CHECK(max_abs(terms[1]) <= 1e-9);
    const auto unequal = magnus_terms(kSys, frozen(f, 0.5 * f), 1);
    CHECK(max_abs(unequal[1]) > 1e-3);
  }
  SUBCASE("second order matches the closed form") {
    for (double ff : {0.3 * f, f}) {
      const auto terms = magnus_terms(kSys, frozen(ff, ff), 2);
      const Mat3 closed = magnus_tau0_analytic(kSys, ff, kDelta);
      CHECK(max_abs(Mat3(terms[0] + terms[2] - closed)) <= 1e-8);
    }
  }
  SUBCASE("closed form coupling is the effective Rabi frequency") {
    const Mat3 closed = magnus_tau0_analytic(kSys, f, kDelta);
    const double eb = kSys.e_b;
    const double expect = eb * f * f / (4.0 * kDelta * kDelta);
    CHECK(closed(kBX, kG).real() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(closed(kBX, kX).real() == doctest::Approx(-eb * eb * f / (4.0 * kHbar * kDelta * kDelta)).epsilon(1e-13));
  }
  SUBCASE("terms are hermitian") {
    FrozenDrive fd = frozen(f, 0.7 * f);
    fd.phase_plus = 1.2;
    for (const auto& t : magnus_terms(kSys, fd, 3)) CHECK(hermiticity_deviation(t) <= 1e-9);
  }
  SUBCASE("third order quadrature is converged") {
    const FrozenDrive fd = frozen(f, 0.7 * f);
    const auto coarse = magnus_terms(kSys, fd, 3);
    MagnusNodes more;
    more.order2 = 48;
    more.order3 = 24;
    const auto fine = magnus_terms(kSys, fd, 3, more);
    CHECK(max_abs(Mat3(coarse[2] - fine[2])) <= 1e-12);
    CHECK(max_abs(Mat3(coarse[3] - fine[3])) <= 1e-12);
  }
  SUBCASE("series converges to the log as the detuning grows") {
    double previous = 1e300;
    for (double scale : {1.0, 2.0, 4.0, 8.0}) {
      const FrozenDrive fd = frozen(f, f, scale * kDelta);
      const double err =
          max_abs(Mat3(stroboscopic_from_log(kSys, fd) - magnus_sum(kSys, fd, 3)));
      CHECK(err < previous);
      previous = err;
    }
  }
  CHECK_THROWS_AS(magnus_terms(kSys, frozen(f, f), 4), std::invalid_argument);
}

TEST_CASE("schrieffer-wolff reduction") {
  SUBCASE("block-diagonal input passes through") {
    Mat3 h = Mat3::Zero();
    h(kX, kX) = 1.41;
    h(kBX, kBX) = 0.2;
    h(kG, kG) = -0.1;
    h(kBX, kG) = cplx(0.05, 0.01);
    h(kG, kBX) = std::conj(h(kBX, kG));
    const Mat2 heff = schrieffer_wolff_reduce(h, kSys);
    CHECK(heff(0, 0) == h(kBX, kBX));
    CHECK(heff(1, 1) == h(kG, kG));
    CHECK(heff(0, 1) == h(kBX, kG));
  }
  SUBCASE("second-order formula") {
    Mat3 h = Mat3::Zero();
    h(kX, kX) = 1.41;
    h(kBX, kX) = cplx(0.1, 0.02);
    h(kX, kBX) = std::conj(h(kBX, kX));
    h(kG, kX) = cplx(-0.07, 0.03);
    h(kX, kG) = std::conj(h(kG, kX));
    const Mat2 heff = schrieffer_wolff_reduce(h, kSys);
    const double den = -1.41;
    CHECK(std::abs(heff(0, 1) - h(kBX, kX) * h(kX, kG) / den) <= 1e-15);
    CHECK(std::abs(heff(0, 0) - h(kBX, kX) * h(kX, kBX) / den) <= 1e-15);
    CHECK(hermiticity_deviation(heff) <= 1e-15);
  }
  SUBCASE("hermitian output from a stroboscopic hamiltonian") {
    FrozenDrive fd = frozen(peak(8.3 * kPi), 0.6 * peak(8.3 * kPi));
    fd.phase_plus = 0.9;
    const Mat2 heff = schrieffer_wolff_reduce(stroboscopic_from_log(kSys, fd), kSys);
    CHECK(hermiticity_deviation(heff) <= 1e-9);
  }
  SUBCASE("degenerate binding energy") {
    CHECK_THROWS_AS(schrieffer_wolff_reduce(Mat3::Zero(), LadderSystem{0.0, 0.0, 0.0}),
                    DegenerateDenominator);
  }
  SUBCASE("coupling ratio") {
    Mat3 h = Mat3::Zero();
    h(kBX, kX) = 0.705;
    CHECK(sw_coupling_ratio(h, kSys) == doctest::Approx(0.5));
  }
}

TEST_CASE("effective fields") {
  SUBCASE("zero delay has no z field") {
    const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, kDelta, 0.0);
    const EffectiveField eff = effective_fields(kSys, d, coarse_grid(d, 200));
    REQUIRE(eff.size() == 200);
    CHECK(eff.max_abs_bz() <= 1e-3 * eff.max_abs_bx());
    CHECK(eff.max_abs_by() <= 1e-3 * eff.max_abs_bx());
  }
  SUBCASE("finite delay gives an antisymmetric z field") {
    const DriveSpec d = DriveSpec::symmetric(8.3 * kPi, 3.61, kDelta, -1.5);
    const EffectiveField eff = effective_fields(kSys, d, coarse_grid(d, 201));
    const std::size_t n = eff.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(eff.times[i] == doctest::Approx(-eff.times[n - 1 - i]).epsilon(1e-12));
      worst = std::max(worst, std::abs(eff.bz[i] + eff.bz[n - 1 - i]));
    }
    CHECK(eff.max_abs_bz() > 1e-3);
    CHECK(worst <= 1e-3 * eff.max_abs_bz());
  }
  SUBCASE("fields grow with the pulse area") {
    for (double tau : {0.0, -1.5}) {
      const DriveSpec a = DriveSpec::symmetric(8.0 * kPi, 3.61, kDelta, tau);
      const DriveSpec b = DriveSpec::symmetric(10.0 * kPi, 3.61, kDelta, tau);
      const EffectiveField ea = effective_fields(kSys, a, coarse_grid(a, 120));
      const EffectiveField eb = effective_fields(kSys, b, coarse_grid(b, 120));
      CHECK(eb.max_abs_bx() > ea.max_abs_bx());
      if (tau != 0.0) CHECK(eb.max_abs_bz() > ea.max_abs_bz());
    }
  }
  SUBCASE("magnus route converges to the log route with detuning") {
    FieldOptions magnus;
    magnus.route = FieldRoute::kMagnus;
    std::vector<double> gap;
    for (double scale : {1.0, 2.0, 4.0}) {
      const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, scale * kDelta, -1.5);
      const auto grid = coarse_grid(d, 40);
      const EffectiveField a = effective_fields(kSys, d, grid);
      const EffectiveField b = effective_fields(kSys, d, grid, magnus);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max({worst, std::abs(a.bx[i] - b.bx[i]), std::abs(a.bz[i] - b.bz[i])});
      }
      gap.push_back(worst / a.max_abs_bx());
    }
    CHECK(gap[1] < gap[0]);
    CHECK(gap[2] < gap[1]);
    CHECK(gap[2] <= 0.05);
  }
  SUBCASE("drive off gives zero fields") {
    const DriveSpec d = DriveSpec::symmetric(0.0, 3.61, kDelta, 0.0);
    const EffectiveField eff = effective_fields(kSys, d, coarse_grid(d, 20));
    CHECK(eff.max_abs_bx() <= 1e-12);
    CHECK(eff.max_abs_bz() <= 1e-12);
  }
  SUBCASE("peak coupling matches the reduction pipeline") {
    const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, kDelta, 0.0);
    const double t[] = {0.0};
    const EffectiveField eff = effective_fields(kSys, d, t);
    const Mat2 heff = schrieffer_wolff_reduce(
        stroboscopic_from_log(kSys, FrozenDrive::at(d, 0.0)), kSys);
    CHECK(std::abs(heff(0, 1)) == doctest::Approx(kHbar * std::abs(eff.bx[0]) / 2.0).epsilon(1e-12));
  }
  SUBCASE("warnings") {
    const DriveSpec slow = DriveSpec::symmetric(2.0 * kPi, 3.61, to_angular(0.5), 0.0);
    const EffectiveField eff = effective_fields(kSys, slow, coarse_grid(slow, 10));
    CHECK_FALSE(eff.warnings.empty());
  }
}

TEST_CASE("effective two-level propagation") {
  SUBCASE("zero field keeps the state") {
    EffectiveField eff;
    eff.times = {0.0, 1.0, 2.0};
    eff.bx = eff.by = eff.bz = {0.0, 0.0, 0.0};
    const BlochTrajectory tr = propagate_effective(eff, Vec2(0.0, 1.0));
    for (double z : tr.sz) CHECK(z == doctest::Approx(-1.0));
  }
  SUBCASE("constant pi rotation inverts the population") {
    EffectiveField eff;
    const int n = 101;
    const double duration = 10.0;
    for (int i = 0; i < n; ++i) {
      eff.times.push_back(duration * i / (n - 1));
      eff.bx.push_back(kPi / duration);
      eff.by.push_back(0.0);
      eff.bz.push_back(0.0);
    }
    const BlochTrajectory tr = propagate_effective(eff, Vec2(0.0, 1.0));
    CHECK(tr.sz.front() == doctest::Approx(-1.0));
    CHECK(tr.sz.back() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double r2 = tr.sx[i] * tr.sx[i] + tr.sy[i] * tr.sy[i] + tr.sz[i] * tr.sz[i];
      CHECK(std::abs(r2 - 1.0) <= 1e-8);
    }
  }
  SUBCASE("coarse sampling is rejected") {
    EffectiveField eff;
    eff.times = {0.0, 1.0};
    eff.bx = {1.0, 1.0};
    eff.by = eff.bz = {0.0, 0.0};
    CHECK_THROWS_AS(propagate_effective(eff, Vec2(0.0, 1.0)), StepTooLarge);
    const EffectiveField dense = densify(eff, 0.05);
    CHECK(dense.size() >= 21);
    CHECK_NOTHROW(propagate_effective(dense, Vec2(0.0, 1.0)));
  }
  SUBCASE("effective model follows the full model") {
    for (double tau : {0.0, -1.5}) {
      const DriveSpec d = DriveSpec::symmetric(8.0 * kPi, 3.61, kDelta, tau);
      const EffectiveField eff = densify(effective_fields(kSys, d, coarse_grid(d)));
      const BlochTrajectory tr = propagate_effective(eff, Vec2(0.0, 1.0));
      const double p_eff = 0.5 * (1.0 + tr.sz.back());
      const double p_full = std::norm(final_amplitudes(kSys, d, PureState::ground())(kBX));
      CHECK(std::abs(p_eff - p_full) <= 0.1);
    }
  }
}

TEST_CASE("bloch vector of the full model") {
  const DriveSpec d = DriveSpec::symmetric(7.7 * kPi, 3.61, kDelta, 0.0);
  const TimeWindow w = default_window(d);
  PropagationOptions opts;
  opts.keep_amplitudes = true;
  const TimeSeries ts = propagate_state(kSys, d, PureState::ground(), uniform_grid(w.t0, w.t1, 50), opts);
  const BlochTrajectory tr = bloch_from_amplitudes(ts);
  CHECK(tr.sz.front() == doctest::Approx(-1.0));
  CHECK(tr.sz.back() == doctest::Approx(2.0 * ts.final_bx() - 1.0 + ts.final_occupations()[kX]));
  CHECK_THROWS_AS(bloch_from_amplitudes(propagate_state(kSys, d, PureState::ground(), uniform_grid(w.t0, w.t1, 5))),
                  std::invalid_argument);
}

TEST_CASE("effective pulse area") {
  const DriveSpec d = DriveSpec::symmetric(5.0 * kPi, 3.61, kDelta, 0.0);
  const double lambda = effective_pulse_area(kSys, d);
  const double eb = kSys.e_b;
  const double theta = 5.0 * kPi;
  const double expect = eb / (8.0 * std::sqrt(kPi) * kHbar * kDelta * kDelta * 3.61) *
                        (1.0 - eb * eb / (2.0 * kHbar * kHbar * kDelta * kDelta)) * theta * theta;
  CHECK(lambda == doctest::Approx(expect).epsilon(1e-14));

  const DriveSpec d2 = DriveSpec::symmetric(10.0 * kPi, 3.61, kDelta, 0.0);
  CHECK(effective_pulse_area(kSys, d2) == doctest::Approx(4.0 * lambda).epsilon(1e-15));
  CHECK(predicted_bx_occupation(kSys, d) == doctest::Approx(std::pow(std::sin(lambda), 2)));

  const DriveSpec off = DriveSpec::symmetric(0.0, 3.61, kDelta, 0.0);
  CHECK(effective_pulse_area(kSys, off) == 0.0);
  CHECK(predicted_bx_occupation(kSys, off) == 0.0);

  CHECK_THROWS_AS(effective_pulse_area(kSys, DriveSpec::symmetric(kPi, 3.61, kDelta, -1.5)),
                  std::invalid_argument);
}

TEST_CASE("effective pulse area predicts the first oscillation at large detuning") {
  const LadderSystem sys = kSys;
  const double delta = to_angular(15.0);
  for (double th : {10.0, 20.0}) {
    const DriveSpec d = DriveSpec::symmetric(th * kPi, 3.61, delta, 0.0);
    const double full = std::norm(final_amplitudes(sys, d, PureState::ground())(kBX));
    CHECK(std::abs(predicted_bx_occupation(sys, d) - full) <= 0.1);
  }
}

TEST_CASE("field and trajectory csv") {
  EffectiveField eff;
  eff.times = {0.0, 0.01};
  eff.bx = {0.1, 0.2};
  eff.by = {0.0, 0.0};
  eff.bz = {-0.5, 0.5};
  std::ostringstream a;
  write_csv(a, eff);
  CHECK(a.str() == "t_ps,bx,by,bz\n0,0.1,0,-0.5\n0.01,0.2,0,0.5\n");

  BlochTrajectory tr;
  tr.times = {1.0};
  tr.sx = {0.0};
  tr.sy = {0.0};
  tr.sz = {-1.0};
  std::ostringstream b;
  write_csv(b, tr);
  CHECK(b.str() == "t_ps,sx,sy,sz\n1,0,0,-1\n");
}
