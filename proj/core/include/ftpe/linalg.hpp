#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ftpe/model.hpp"

namespace ftpe {

/// exp(-i·H·t) for Hermitian H, by eigendecomposition. Exactly unitary up to
/// rounding.
template <class Matrix>
Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  auto phases = (es.eigenvalues().array() * cplx(0.0, -t)).exp().matrix();
  return v * phases.asDiagonal() * v.adjoint();
}

/// Principal-branch generator of a unitary: returns Hermitian G with
/// U = exp(-i·G), eigenvalues of G in [-π, π). Throws BranchAmbiguity when an
/// eigenphase lies within `branch_tol` of ±π.
Mat3 log_unitary(const Mat3& u, double branch_tol = 1e-6);

template <class Matrix>
Matrix commutator(const Matrix& a, const Matrix& b) {
  return a * b - b * a;
}

/// max_ij |(U†U - I)_ij|
template <class Matrix>
double unitarity_deviation(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// max_ij |(H - H†)_ij|
template <class Matrix>
double hermiticity_deviation(const Matrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <class Matrix>
double max_abs(const Matrix& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace ftpe
