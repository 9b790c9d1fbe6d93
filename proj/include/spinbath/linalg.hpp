#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spinbath {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using cxd = std::complex<double>;
using MatrixXcd = Matrix<cxd>;
using VectorXcd = Vector<cxd>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr cxd kImag{0.0, 1.0};

// Kronecker product, row-major convention: (A kron B)(i*p+k, j*q+l) = A(i,j)B(k,l).
template <class Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Embed a single-site operator into a product space given per-site dimensions.
template <class Scalar>
Matrix<Scalar> embed(const Matrix<Scalar>& op, int site,
                     const std::vector<int>& dims) {
  Matrix<Scalar> out = Matrix<Scalar>::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (k == site) {
      out = kron(out, op);
    } else {
      Matrix<Scalar> id = Matrix<Scalar>::Identity(dims[k], dims[k]);
      out = kron(out, id);
    }
  }
  return out;
}

// Two-site embedded product op_i * op_j (i != j), cheaper than two embeds.
template <class Scalar>
Matrix<Scalar> embed2(const Matrix<Scalar>& op_i, int site_i,
                      const Matrix<Scalar>& op_j, int site_j,
                      const std::vector<int>& dims) {
  Matrix<Scalar> out = Matrix<Scalar>::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (k == site_i) {
      out = kron(out, op_i);
    } else if (k == site_j) {
      out = kron(out, op_j);
    } else {
      Matrix<Scalar> id = Matrix<Scalar>::Identity(dims[k], dims[k]);
      out = kron(out, id);
    }
  }
  return out;
}

// exp(-i H t) for Hermitian H via eigendecomposition.
MatrixXcd hermitian_propagator(const MatrixXcd& h, double t);

// Eigendecomposition cache so many propagation times reuse one solve.
struct HermitianExp {
  MatrixXcd vectors;
  Eigen::VectorXd values;

  explicit HermitianExp(const MatrixXcd& h);
  MatrixXcd propagator(double t) const;  // exp(-i H t)
};

bool is_hermitian(const MatrixXcd& h, double tol = 1e-10);

}  // namespace spinbath
