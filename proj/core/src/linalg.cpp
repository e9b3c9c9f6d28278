#include "ftpe/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "ftpe/errors.hpp"

namespace ftpe {

Mat3 log_unitary(const Mat3& u, double branch_tol) {
  // A unitary matrix is normal, so its complex Schur form is diagonal and the
  // Schur vectors are an orthonormal eigenbasis.
  Eigen::ComplexSchur<Mat3> schur(u);
  const Mat3& q = schur.matrixU();
  const Mat3& tri = schur.matrixT();

  Eigen::Vector3d gen;
  for (int k = 0; k < 3; ++k) {
    const double phase = std::arg(tri(k, k));
    if (kPi - std::abs(phase) < branch_tol) {
      std::ostringstream msg;
      msg << "eigenphase " << phase << " of the one-period propagator lies on the branch cut";
      throw BranchAmbiguity(msg.str());
    }
    gen(k) = -phase;
  }
  Mat3 g = q * gen.cast<cplx>().asDiagonal() * q.adjoint();
  return 0.5 * (g + g.adjoint());
}

}  // namespace ftpe
