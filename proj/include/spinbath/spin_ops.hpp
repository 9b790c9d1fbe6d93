#pragma once

#include "spinbath/errors.hpp"
#include "spinbath/linalg.hpp"

#include <cmath>

namespace spinbath {

// Standard angular-momentum matrices of dimension 2s+1, basis ordered by
// descending magnetic quantum number m = s, s-1, ..., -s.
template <class Scalar = double>
struct SpinOperators {
  using Mat = Matrix<std::complex<Scalar>>;
  Mat sx, sy, sz, sp, sm;
  int dim = 0;
};

template <class Scalar = double>
SpinOperators<Scalar> spin_operators(double s) {
  const double two_s = 2.0 * s;
  const int n = static_cast<int>(std::lround(two_s)) + 1;
  if (s <= 0.0 || std::abs(two_s - std::lround(two_s)) > 1e-12 || n > 6)
    throw ConfigError("spin_operators: unsupported spin quantum number " +
                      std::to_string(s));
  using C = std::complex<Scalar>;
  using Mat = Matrix<C>;
  Mat sz = Mat::Zero(n, n), sp = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = s - i;
    sz(i, i) = C(static_cast<Scalar>(m), 0);
    if (i > 0) {
      // <m| S+ |m-1> = sqrt(s(s+1) - m'(m'+1)) with m' = m of the lower state
      const double mlow = s - i;
      sp(i - 1, i) =
          C(static_cast<Scalar>(std::sqrt(s * (s + 1) - mlow * (mlow + 1))), 0);
    }
  }
  SpinOperators<Scalar> ops;
  ops.dim = n;
  ops.sz = sz;
  ops.sp = sp;
  ops.sm = sp.adjoint();
  ops.sx = (sp + ops.sm) / Scalar(2);
  ops.sy = (sp - ops.sm) / C(0, 2);
  return ops;
}

}  // namespace spinbath
