#include <stdexcept>

#include "ftpe/floquet.hpp"
#include "ftpe/linalg.hpp"
#include "quadrature.hpp"

namespace ftpe {

namespace {

using detail::GaussRule;

Mat3 comm(const Mat3& a, const Mat3& b) { return a * b - b * a; }

// All integrals below are over the simplex T > t1 > t2 > ... > 0 and use
// the generator G = H/ħ; the ħ factors of the Magnus formulas cancel.

Mat3 order0(const LadderSystem& sys, const FrozenDrive& fd, int n) {
  const GaussRule r = detail::gauss_legendre_unit(n);
  const double period = fd.period();
  Mat3 acc = Mat3::Zero();
  for (int i = 0; i < n; ++i) acc += r.weights[i] * frozen_generator(sys, fd, period * r.nodes[i]);
  return acc;
}

Mat3 order1(const LadderSystem& sys, const FrozenDrive& fd, int n) {
  const GaussRule r = detail::gauss_legendre_unit(n);
  const double period = fd.period();
  Mat3 acc = Mat3::Zero();
  for (int i = 0; i < n; ++i) {
    const double t1 = period * r.nodes[i];
    const Mat3 g1 = frozen_generator(sys, fd, t1);
    Mat3 inner = Mat3::Zero();
    for (int j = 0; j < n; ++j) {
      const double t2 = t1 * r.nodes[j];
      inner += r.weights[j] * comm(g1, frozen_generator(sys, fd, t2));
    }
    acc += (period * r.weights[i] * t1) * inner;
  }
  return cplx(0.0, -0.5 / period) * acc;
}

Mat3 order2(const LadderSystem& sys, const FrozenDrive& fd, int n) {
  const GaussRule r = detail::gauss_legendre_unit(n);
  const double period = fd.period();
  Mat3 acc = Mat3::Zero();
  for (int i = 0; i < n; ++i) {
    const double t1 = period * r.nodes[i];
    const Mat3 g1 = frozen_generator(sys, fd, t1);
    Mat3 acc_j = Mat3::Zero();
    for (int j = 0; j < n; ++j) {
      const double t2 = t1 * r.nodes[j];
      const Mat3 g2 = frozen_generator(sys, fd, t2);
      Mat3 acc_k = Mat3::Zero();
      for (int k = 0; k < n; ++k) {
        const double t3 = t2 * r.nodes[k];
        const Mat3 g3 = frozen_generator(sys, fd, t3);
        acc_k += r.weights[k] * (comm(g1, comm(g2, g3)) + comm(g3, comm(g2, g1)));
      }
      acc_j += (r.weights[j] * t2) * acc_k;
    }
    acc += (period * r.weights[i] * t1) * acc_j;
  }
  return (-1.0 / (6.0 * period)) * acc;
}

Mat3 order3(const LadderSystem& sys, const FrozenDrive& fd, int n) {
  const GaussRule r = detail::gauss_legendre_unit(n);
  const double period = fd.period();
  Mat3 acc = Mat3::Zero();
  for (int i = 0; i < n; ++i) {
    const double t1 = period * r.nodes[i];
    const Mat3 g1 = frozen_generator(sys, fd, t1);
    Mat3 acc_j = Mat3::Zero();
    for (int j = 0; j < n; ++j) {
      const double t2 = t1 * r.nodes[j];
      const Mat3 g2 = frozen_generator(sys, fd, t2);
      const Mat3 c12 = comm(g1, g2);
      Mat3 acc_k = Mat3::Zero();
      for (int k = 0; k < n; ++k) {
        const double t3 = t2 * r.nodes[k];
        const Mat3 g3 = frozen_generator(sys, fd, t3);
        const Mat3 c12_3 = comm(c12, g3);
        const Mat3 c23 = comm(g2, g3);
        Mat3 acc_l = Mat3::Zero();
        for (int l = 0; l < n; ++l) {
          const double t4 = t3 * r.nodes[l];
          const Mat3 g4 = frozen_generator(sys, fd, t4);
          const Mat3 term = comm(c12_3, g4)                      // [[[H1,H2],H3],H4]
                            + comm(g1, comm(c23, g4))            // [H1,[[H2,H3],H4]]
                            + comm(g1, comm(g2, comm(g3, g4)))   // [H1,[H2,[H3,H4]]]
                            + comm(g2, comm(g3, comm(g4, g1)));  // [H2,[H3,[H4,H1]]]
          acc_l += r.weights[l] * term;
        }
        acc_k += (r.weights[k] * t3) * acc_l;
      }
      acc_j += (r.weights[j] * t2) * acc_k;
    }
    acc += (period * r.weights[i] * t1) * acc_j;
  }
  return cplx(0.0, 1.0 / (12.0 * period)) * acc;
}

}  // namespace

std::vector<Mat3> magnus_terms(const LadderSystem& sys, const FrozenDrive& fd, int max_order,
                               const MagnusNodes& nodes) {
  if (max_order < 0 || max_order > 3) {
    throw std::invalid_argument("Magnus order must be in 0..3");
  }
  std::vector<Mat3> terms;
  terms.reserve(max_order + 1);
  terms.push_back(kHbar * order0(sys, fd, nodes.order0));
  if (max_order >= 1) terms.push_back(kHbar * order1(sys, fd, nodes.order1));
  if (max_order >= 2) terms.push_back(kHbar * order2(sys, fd, nodes.order2));
  if (max_order >= 3) terms.push_back(kHbar * order3(sys, fd, nodes.order3));
  return terms;
}

Mat3 magnus_sum(const LadderSystem& sys, const FrozenDrive& fd, int max_order,
                const MagnusNodes& nodes) {
  Mat3 sum = Mat3::Zero();
  for (const Mat3& t : magnus_terms(sys, fd, max_order, nodes)) sum += t;
  return sum;
}

Mat3 magnus_tau0_analytic(const LadderSystem& sys, double f, double delta) {
  if (delta == 0.0) throw std::invalid_argument("closed-form Magnus terms need delta != 0");
  const double eb = sys.e_b;
  Mat3 m1, m2;
  m1 << 1, 0, 1,
        0, -2, 0,
        1, 0, 1;
  m2 << 0, 1, 0,
        1, 0, 1,
        0, 1, 0;
  Mat3 h0 = Mat3::Zero();
  h0(kX, kX) = 0.5 * eb;
  const double pref = eb * f / (4.0 * kHbar * delta * delta);
  return h0 + pref * (kHbar * f * m1 - eb * m2);
}

}  // namespace ftpe
