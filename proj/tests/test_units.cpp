#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

using namespace spinbath;

TEST_CASE("constants") {
  CHECK(PhysicalConstants::eps_d == 5.7);
  CHECK(PhysicalConstants::gamma_e < 0.0);
  CHECK(std::abs(PhysicalConstants::gamma_e) ==
        doctest::Approx(1.76085963e11).epsilon(1e-6));
}

TEST_CASE("definitional conversions") {
  CHECK(unit_convert(1.0, Unit::megahertz, Unit::rad_per_us) ==
        doctest::Approx(6.283185307).epsilon(1e-9));
  CHECK(unit_convert(400.0, Unit::gauss, Unit::tesla) ==
        doctest::Approx(0.04).epsilon(1e-14));
  CHECK(unit_convert(3.567, Unit::angstrom, Unit::nm) ==
        doctest::Approx(0.3567).epsilon(1e-14));
  CHECK(unit_convert(2.5, Unit::ns, Unit::us) ==
        doctest::Approx(0.0025).epsilon(1e-14));
}

TEST_CASE("round trips are identities") {
  const double values[] = {1.0, 3.14159, 7.77e-3, 123456.0};
  const std::pair<Unit, Unit> pairs[] = {
      {Unit::nm, Unit::angstrom},
      {Unit::us, Unit::ns},
      {Unit::rad_per_us, Unit::megahertz},
      {Unit::gauss, Unit::tesla},
  };
  for (double v : values)
    for (auto [a, b] : pairs) {
      const double back = unit_convert(unit_convert(v, a, b), b, a);
      CHECK(std::abs(back - v) <= 1e-14 * std::abs(v));
    }
}

TEST_CASE("incompatible dimensions are rejected") {
  CHECK_THROWS_AS(unit_convert(1.0, Unit::nm, Unit::us), ConfigError);
  CHECK_THROWS_AS(unit_convert(1.0, Unit::kelvin, Unit::gauss), ConfigError);
  CHECK(unit_convert(1.0, Unit::kelvin, Unit::kelvin) == 1.0);
}

TEST_CASE("unit name parsing") {
  CHECK(unit_from_string("MHz") == Unit::megahertz);
  CHECK(unit_from_string("A") == Unit::angstrom);
  CHECK_THROWS_AS(unit_from_string("furlong"), ConfigError);
}
