#include "spinbath/units.hpp"

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

enum class Dimension { length, time, frequency, field, temperature };

struct UnitInfo {
  Dimension dim;
  double to_canonical;  // canonical: nm, us, rad/us, Tesla, Kelvin
};

UnitInfo info(Unit u) {
  switch (u) {
    case Unit::nm: return {Dimension::length, 1.0};
    case Unit::angstrom: return {Dimension::length, 0.1};
    case Unit::us: return {Dimension::time, 1.0};
    case Unit::ns: return {Dimension::time, 1e-3};
    case Unit::rad_per_us: return {Dimension::frequency, 1.0};
    case Unit::megahertz: return {Dimension::frequency, kTwoPi};
    case Unit::gauss: return {Dimension::field, 1e-4};
    case Unit::tesla: return {Dimension::field, 1.0};
    case Unit::kelvin: return {Dimension::temperature, 1.0};
  }
  throw ConfigError("unit_convert: unknown unit");
}

}  // namespace

Unit unit_from_string(const std::string& name) {
  if (name == "nm") return Unit::nm;
  if (name == "A" || name == "angstrom") return Unit::angstrom;
  if (name == "us") return Unit::us;
  if (name == "ns") return Unit::ns;
  if (name == "rad/us") return Unit::rad_per_us;
  if (name == "MHz") return Unit::megahertz;
  if (name == "G" || name == "gauss") return Unit::gauss;
  if (name == "T" || name == "tesla") return Unit::tesla;
  if (name == "K" || name == "kelvin") return Unit::kelvin;
  throw ConfigError("unknown unit '" + name + "'");
}

std::string unit_to_string(Unit u) {
  switch (u) {
    case Unit::nm: return "nm";
    case Unit::angstrom: return "angstrom";
    case Unit::us: return "us";
    case Unit::ns: return "ns";
    case Unit::rad_per_us: return "rad/us";
    case Unit::megahertz: return "MHz";
    case Unit::gauss: return "gauss";
    case Unit::tesla: return "tesla";
    case Unit::kelvin: return "kelvin";
  }
  return "?";
}

double unit_convert(double value, Unit from, Unit to) {
  const UnitInfo a = info(from);
  const UnitInfo b = info(to);
  if (a.dim != b.dim)
    throw ConfigError("unit_convert: incompatible units " +
                      unit_to_string(from) + " -> " + unit_to_string(to));
  if (from == to) return value;
  return value * (a.to_canonical / b.to_canonical);
}

}  // namespace spinbath
