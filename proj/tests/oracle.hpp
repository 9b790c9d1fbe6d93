// Independent reference implementations used by the tests. These assemble
// Hamiltonians and propagate states directly from first principles (own
// spin matrices, own Kronecker products, own integrators) so that engine
// results can be checked against a separate code path.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace oracle {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Spin {
  Mat sx, sy, sz, sp, sm;
  int dim;
};

inline Spin spin_half() {
  Spin s;
  s.dim = 2;
  s.sx = Mat::Zero(2, 2);
  s.sx << 0, 0.5, 0.5, 0;
  s.sy = Mat::Zero(2, 2);
  s.sy << 0, cxd(0, -0.5), cxd(0, 0.5), 0;
  s.sz = Mat::Zero(2, 2);
  s.sz << 0.5, 0, 0, -0.5;
  s.sp = s.sx + cxd(0, 1) * s.sy;
  s.sm = s.sx - cxd(0, 1) * s.sy;
  return s;
}

inline Spin spin_one() {
  const double r = std::sqrt(0.5);
  Spin s;
  s.dim = 3;
  s.sx = Mat::Zero(3, 3);
  s.sx << 0, r, 0, r, 0, r, 0, r, 0;
  s.sy = Mat::Zero(3, 3);
  s.sy << 0, cxd(0, -r), 0, cxd(0, r), 0, cxd(0, -r), 0, cxd(0, r), 0;
  s.sz = Mat::Zero(3, 3);
  s.sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  s.sp = s.sx + cxd(0, 1) * s.sy;
  s.sm = s.sx - cxd(0, 1) * s.sy;
  return s;
}

inline Mat embed(const Mat& op, int site, const std::vector<int>& dims) {
  Mat out = Mat::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    out = kron(out, k == site ? op : Mat::Identity(dims[k], dims[k]));
  return out;
}

inline Mat expm_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec ph(es.eigenvalues().size());
  for (int i = 0; i < ph.size(); ++i)
    ph(i) = std::exp(cxd(0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Fixed-step RK4 for d rho/dt = -i[h, rho] + sum_k g_k (L rho L+ - .5{L+L, rho})
inline Mat lindblad_rk4(const Mat& h,
                        const std::vector<std::pair<Mat, double>>& jumps,
                        Mat rho, double t_total, int steps) {
  auto deriv = [&](const Mat& r) {
    Mat d = cxd(0, -1) * (h * r - r * h);
    for (const auto& [l, g] : jumps) {
      const Mat ldl = l.adjoint() * l;
      d += g * (l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl));
    }
    return d;
  };
  const double dt = t_total / steps;
  for (int s = 0; s < steps; ++s) {
    const Mat k1 = deriv(rho);
    const Mat k2 = deriv(rho + 0.5 * dt * k1);
    const Mat k3 = deriv(rho + 0.5 * dt * k2);
    const Mat k4 = deriv(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return rho;
}

// SI constants for the independent coupling arithmetic.
constexpr double mu0 = 1.25663706212e-6;
constexpr double hbar_si = 1.054571817e-34;
constexpr double pi = 3.14159265358979323846;

// Dipolar coupling prefactor in rad/us nm^3 computed straight from SI.
inline double dipolar_si(double g1, double g2, double r_nm) {
  const double r_m = r_nm * 1e-9;
  const double rad_per_s = (mu0 / (4 * pi)) * g1 * g2 * hbar_si / (r_m * r_m * r_m);
  return rad_per_s * 1e-6;
}

}  // namespace oracle
