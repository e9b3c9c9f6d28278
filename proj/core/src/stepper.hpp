#pragma once

// Inlined step kernels shared by the propagators. Generators return H/ħ in
// rad/ps.

#include <Eigen/Dense>
#include <cmath>

#include "ftpe/model.hpp"
#include "ftpe/propagator.hpp"

namespace ftpe::detail {

inline constexpr double kGaussOffset = 0.28867513459481288225;  // √3/6
inline constexpr double kMagnusCommutator = 0.14433756729740644113;  // √3/12

/// Hermitian generator whose exponential exp(-i·K·h) advances one step.
template <class Gen>
Mat3 step_generator(Gen& gen, double t, double h, Integrator integrator) {
  if (integrator == Integrator::kMidpoint) return gen(t + 0.5 * h);
  const Mat3 a1 = gen(t + (0.5 - kGaussOffset) * h);
  const Mat3 a2 = gen(t + (0.5 + kGaussOffset) * h);
  const Mat3 comm = a2 * a1 - a1 * a2;
  return 0.5 * (a1 + a2) - cplx(0.0, kMagnusCommutator * h) * comm;
}

class StepExponential {
 public:
  void compute(const Mat3& k, double h) {
    es_.compute(k);
    phases_ = (es_.eigenvalues().array() * cplx(0.0, -h)).exp().matrix();
  }
  Mat3 matrix() const {
    const Mat3& v = es_.eigenvectors();
    return v * phases_.asDiagonal() * v.adjoint();
  }
  void apply(Vec3& psi) const {
    const Mat3& v = es_.eigenvectors();
    Vec3 tmp = v.adjoint() * psi;
    tmp = phases_.cwiseProduct(tmp);
    psi = v * tmp;
  }

 private:
  Eigen::SelfAdjointEigenSolver<Mat3> es_;
  Vec3 phases_;
};

template <class Gen>
Mat3 unitary_over(Gen& gen, double t0, double t1, double dt_max, Integrator integrator) {
  const std::size_t n = step_count(t0, t1, dt_max);
  const double h = (t1 - t0) / static_cast<double>(n);
  Mat3 u = Mat3::Identity();
  StepExponential ex;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    ex.compute(step_generator(gen, t, h, integrator), h);
    u = ex.matrix() * u;
  }
  return u;
}

template <class Gen>
void advance_state(Gen& gen, Vec3& psi, double t0, double t1, double dt_max,
                   Integrator integrator) {
  const std::size_t n = step_count(t0, t1, dt_max);
  const double h = (t1 - t0) / static_cast<double>(n);
  StepExponential ex;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    ex.compute(step_generator(gen, t, h, integrator), h);
    ex.apply(psi);
  }
}

/// Generator of the dichromatic ladder with the drive evaluated inline.
struct LadderGen {
  DriveSpec d;
  double shift;
  Mat3 operator()(double t) const { return ladder_generator(drive_value(d, t), shift); }
};

}  // namespace ftpe::detail
