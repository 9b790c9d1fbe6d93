#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spinbath/errors.hpp"
#include "spinbath/spin_ops.hpp"

using namespace spinbath;

namespace {
double comm_residual(const MatrixXcd& a, const MatrixXcd& b,
                     const MatrixXcd& c) {
  return (a * b - b * a - kImag * c).norm();
}
}  // namespace

TEST_CASE("spin one half matrices") {
  const auto s = spin_operators(0.5);
  CHECK(s.sz(0, 0).real() == doctest::Approx(0.5));
  CHECK(s.sz(1, 1).real() == doctest::Approx(-0.5));
  CHECK(std::abs(s.sx(0, 1) - cxd(0.5, 0)) < 1e-15);
  CHECK(comm_residual(s.sx, s.sy, s.sz) < 1e-14);
}

TEST_CASE("spin one matrices") {
  const auto s = spin_operators(1.0);
  CHECK(s.sz(0, 0).real() == doctest::Approx(1.0));
  CHECK(s.sz(1, 1).real() == doctest::Approx(0.0));
  CHECK(s.sz(2, 2).real() == doctest::Approx(-1.0));
  CHECK(std::abs(s.sx(0, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(comm_residual(s.sx, s.sy, s.sz) < 1e-14);
}

TEST_CASE("su2 algebra and Casimir for all supported spins") {
  for (double spin : {0.5, 1.0, 1.5, 2.5}) {
    const auto s = spin_operators(spin);
    CHECK(comm_residual(s.sx, s.sy, s.sz) < 1e-12);
    CHECK(comm_residual(s.sy, s.sz, s.sx) < 1e-12);
    CHECK(comm_residual(s.sz, s.sx, s.sy) < 1e-12);
    const MatrixXcd s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
    const MatrixXcd expect =
        spin * (spin + 1.0) * MatrixXcd::Identity(s.dim, s.dim);
    CHECK((s2 - expect).norm() < 1e-12);
    CHECK((s.sp - (s.sx + kImag * s.sy)).norm() < 1e-14);
    CHECK((s.sm - (s.sx - kImag * s.sy)).norm() < 1e-14);
  }
}

TEST_CASE("unsupported spins rejected") {
  CHECK_THROWS_AS(spin_operators(0.75), ConfigError);
  CHECK_THROWS_AS(spin_operators(3.0), ConfigError);
  CHECK_THROWS_AS(spin_operators(-0.5), ConfigError);
}
