#include "spinbath/species.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

namespace spinbath {

namespace {

std::vector<SpinSpecies> build_registry() {
  // Gyromagnetic ratios: CODATA / standard NMR tables, signed, rad/(s T).
  std::vector<SpinSpecies> reg;
  reg.push_back({"e", 0.5, PhysicalConstants::gamma_e, std::nullopt, 1.0});
  reg.push_back({"13C", 0.5, 6.728284e7, std::nullopt, 0.011});
  reg.push_back({"1H", 0.5, 2.6752218744e8, std::nullopt, 0.99989});
  reg.push_back({"19F", 0.5, 2.51815e8, std::nullopt, 1.0});
  reg.push_back({"14N", 1.0, 1.9337792e7, 2.044e-30, 0.99636});
  reg.push_back({"17O", 2.5, -3.62808e7, -2.558e-30, 0.00038});
  return reg;
}

}  // namespace

const std::vector<SpinSpecies>& all_species() {
  static const std::vector<SpinSpecies> registry = build_registry();
  return registry;
}

const SpinSpecies& species_by_name(const std::string& name) {
  for (const SpinSpecies& s : all_species())
    if (s.name == name) return s;
  throw ConfigError("unknown spin species '" + name + "'");
}

}  // namespace spinbath
