#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"

#include "spinbath/couplings.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"

#include <random>

using namespace spinbath;

namespace {
BathSpin electron_at(int id, const Vec3& p) {
  BathSpin s;
  s.id = id;
  s.species = species_by_name("e");
  s.position = p;
  return s;
}
}  // namespace

TEST_CASE("dipolar kernel axial values and scaling") {
  const Mat3 k1 = dipolar_kernel(Vec3(0, 0, 1));
  CHECK(k1(0, 0) == doctest::Approx(1.0));
  CHECK(k1(1, 1) == doctest::Approx(1.0));
  CHECK(k1(2, 2) == doctest::Approx(-2.0));
  const Mat3 k2 = dipolar_kernel(Vec3(0, 0, 2));
  CHECK(k2(2, 2) == doctest::Approx(-2.0 / 8.0));
  CHECK_THROWS_AS(dipolar_kernel(Vec3::Zero()), NumericError);
}

TEST_CASE("kernel traceless and symmetric over random geometries") {
  Rng rng = make_rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    Vec3 r(u(rng), u(rng), u(rng));
    if (r.norm() < 0.05) continue;
    const Mat3 m = dipolar_kernel(r);
    CHECK(std::abs(m.trace()) < 1e-12 * m.norm());
    CHECK((m - m.transpose()).norm() < 1e-12 * m.norm());
  }
}

TEST_CASE("electron pair tensor against SI arithmetic") {
  // two electrons 10 nm apart along z; zz entry from independent constants
  const double g_e = species_by_name("e").gamma;
  const double expect_zz = -2.0 * oracle::dipolar_si(g_e, g_e, 10.0);
  const CouplingTensor t = dipolar_tensor(
      species_by_name("e"), species_by_name("e"), Vec3::Zero(), Vec3(0, 0, 10));
  CHECK(t.m(2, 2) == doctest::Approx(expect_zz).epsilon(1e-12));
  // magnitude quoted as 2 pi x 0.104 rad/us
  CHECK(std::abs(t.m(2, 2)) == doctest::Approx(2 * kPi * 0.104).epsilon(2e-3));
  CHECK(t.is_symmetric());
  CHECK(t.is_traceless());
}

TEST_CASE("zero gamma and swap symmetry") {
  const CouplingTensor z =
      dipolar_tensor(0.0, 1e8, Vec3::Zero(), Vec3(1, 2, 3));
  CHECK(z.m.norm() == 0.0);
  const CouplingTensor a =
      dipolar_tensor(1e8, 2e8, Vec3(1, 0, 0), Vec3(0, 3, 2));
  const CouplingTensor b =
      dipolar_tensor(1e8, 2e8, Vec3(0, 3, 2), Vec3(1, 0, 0));
  CHECK((a.m - b.m).norm() < 1e-14 * a.m.norm());
}

TEST_CASE("axial coupling magic angle and angular ratio") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  const double d = 3.0;
  BathSpin at_magic =
      electron_at(0, Vec3(d * std::sin(magic), 0, d * std::cos(magic)));
  CHECK(std::abs(axial_coupling(nv, at_magic, Vec3::UnitZ())) < 1e-10);

  BathSpin axial = electron_at(1, Vec3(0, 0, d));
  BathSpin planar = electron_at(2, Vec3(d, 0, 0));
  const double a0 = axial_coupling(nv, axial, Vec3::UnitZ());
  const double a90 = axial_coupling(nv, planar, Vec3::UnitZ());
  CHECK(a0 / a90 == doctest::Approx(-2.0).epsilon(1e-12));

  // theta = 0 numeric value against SI arithmetic
  const double g_e = species_by_name("e").gamma;
  CHECK(a0 == doctest::Approx(oracle::dipolar_si(g_e, g_e, d) * 2.0 / 2.0)
                  .epsilon(1e-12));
}

TEST_CASE("flip-flop coupling mirrors axial structure") {
  BathSpin a = electron_at(0, Vec3(0, 0, 0));
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  BathSpin b = electron_at(1, 5.0 * Vec3(std::sin(magic), 0, std::cos(magic)));
  CHECK(std::abs(flipflop_coupling(a, b, Vec3::UnitZ())) < 1e-10);
  BathSpin c = electron_at(2, Vec3(0, 0, 5));
  BathSpin dpl = electron_at(3, Vec3(5, 0, 0));
  const double f0 = flipflop_coupling(a, c, Vec3::UnitZ());
  const double f90 = flipflop_coupling(a, dpl, Vec3::UnitZ());
  CHECK(f0 / f90 == doctest::Approx(-2.0).epsilon(1e-12));
  const double g_e = species_by_name("e").gamma;
  CHECK(f0 == doctest::Approx(oracle::dipolar_si(g_e, g_e, 5.0)).epsilon(1e-12));
}

TEST_CASE("axial coupling equals minus half the field-projected tensor") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3(1, 1, 1).normalized());
  Rng rng = make_rng(11);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const Vec3 fdir = nv.axis;
  for (int k = 0; k < 1000; ++k) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (p.norm() < 0.3) continue;
    BathSpin s = electron_at(k, p);
    const CouplingTensor t =
        dipolar_tensor(nv.gamma, s.species.gamma, nv.position, s.position);
    const double projected = fdir.dot(t.m * fdir);
    const double scalar = axial_coupling(nv, s, fdir);
    CHECK(scalar == doctest::Approx(-0.5 * projected).epsilon(1e-10));
  }
}

TEST_CASE("disk field closed form limits") {
  DiskChargeModel m;
  m.sigma = 1e-3;
  m.radius_nm = 10.0;
  const double scale =
      m.sigma / (PhysicalConstants::eps0 * (PhysicalConstants::eps_d + 1.0));
  // z = 0: full scale
  CHECK(disk_field(m, Vec3::Zero()).z() == doctest::Approx(scale));
  // z -> infinity: vanishes
  CHECK(disk_field(m, Vec3(0, 0, 1e7)).norm() < 1e-9 * scale);
  // a -> infinity at fixed z: infinite-sheet limit
  DiskChargeModel big = m;
  big.radius_nm = 1e7;
  CHECK(disk_field(big, Vec3(0, 0, 5)).z() ==
        doctest::Approx(scale).epsilon(1e-6));
}

TEST_CASE("disk field quadrature matches closed form on axis") {
  DiskChargeModel m;
  m.sigma = 2.5e-4;
  m.radius_nm = 8.0;
  for (double z : {2.0, 5.0, 12.0, 30.0}) {
    const Vec3 closed = disk_field(m, Vec3(0, 0, z));
    const Vec3 quad = disk_field_quadrature(m, Vec3(0, 0, z), 1e-9);
    CHECK((closed - quad).norm() <= 1e-6 * closed.norm());
  }
}

TEST_CASE("effective params") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);

  SUBCASE("unmixed limit") {
    nv.e_transverse = 0.0;
    const auto p = effective_params(nv, f);
    CHECK(p.e_eff == 0.0);
    const double gb = std::abs(larmor_rad_us(nv.gamma, 0.04));
    CHECK(p.f_plus == doctest::Approx(nv.d_axial + gb));
    CHECK(p.f_minus == doctest::Approx(nv.d_axial - gb));
    CHECK(std::abs(p.slope_plus) ==
          doctest::Approx(std::abs(larmor_rad_us(nv.gamma, 1e-4))));
  }

  SUBCASE("pure transverse splitting") {
    nv.e_transverse = mhz_to_rad_us(10.0);
    ExternalField none = f;
    none.electric_v_per_m = Vec3::Zero();
    const auto p = effective_params(nv, none);
    CHECK(p.e_eff == doctest::Approx(mhz_to_rad_us(10.0)));
  }

  SUBCASE("slope reduction at 40 MHz mixing is about 0.064 percent") {
    nv.e_transverse = mhz_to_rad_us(40.0);
    const auto p = effective_params(nv, f);
    const double gb = std::abs(larmor_rad_us(nv.gamma, 0.04));
    // gamma Bz corresponds to ~1120 MHz at 400 G
    CHECK(gb / kTwoPi == doctest::Approx(1120.8).epsilon(2e-3));
    const double bare = std::abs(larmor_rad_us(nv.gamma, 1e-4));
    const double reduction = 1.0 - std::abs(p.slope_plus) / bare;
    CHECK(reduction == doctest::Approx(0.00064).epsilon(0.02));
    CHECK(p.f_plus > p.f_minus);
  }
}

TEST_CASE("central frame stark projection") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3(1, 0, 1).normalized());
  const Vec3 e_lab(0, 0, 1000.0);
  const Vec3 e_nv = field_in_central_frame(nv, e_lab);
  CHECK(e_nv.norm() == doctest::Approx(1000.0));
  CHECK(e_nv.z() == doctest::Approx(1000.0 / std::sqrt(2.0)));
}
