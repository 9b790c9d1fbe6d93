#include "spinbath/linalg.hpp"

#include "spinbath/errors.hpp"

namespace spinbath {

bool is_hermitian(const MatrixXcd& h, double tol) {
  const double scale = std::max(h.norm(), 1.0);
  return (h - h.adjoint()).norm() <= tol * scale;
}

HermitianExp::HermitianExp(const MatrixXcd& h) {
  if (!is_hermitian(h))
    throw NumericError("HermitianExp: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw NumericError("HermitianExp: eigendecomposition failed");
  vectors = solver.eigenvectors();
  values = solver.eigenvalues();
}

MatrixXcd HermitianExp::propagator(double t) const {
  VectorXcd phases(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    phases(i) = std::exp(cxd(0.0, -values(i) * t));
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

MatrixXcd hermitian_propagator(const MatrixXcd& h, double t) {
  return HermitianExp(h).propagator(t);
}

}  // namespace spinbath
