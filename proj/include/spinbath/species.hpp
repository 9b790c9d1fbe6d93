#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spinbath {

// An isotope (or the bare electron) with its spin quantum number and
// gyromagnetic ratio. Gyromagnetic ratios are signed, in rad/(s T).
struct SpinSpecies {
  std::string name;
  double spin = 0.5;                       // in {1/2, 1, 3/2, 5/2}
  double gamma = 0.0;                      // rad / (s T), signed
  std::optional<double> quadrupole_moment; // m^2, present iff spin >= 1
  double natural_abundance = 1.0;          // fraction in [0, 1]

  int dim() const { return static_cast<int>(2.0 * spin + 1.5); }
  bool is_electron() const { return name == "e"; }
};

// Registry of the species used by the bath generators.
const SpinSpecies& species_by_name(const std::string& name);
const std::vector<SpinSpecies>& all_species();

}  // namespace spinbath
