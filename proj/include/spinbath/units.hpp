#pragma once

#include <string>

namespace spinbath {

// CODATA 2018 values, SI. eps_d is the relative permittivity of diamond.
struct PhysicalConstants {
  static constexpr double mu0 = 1.25663706212e-6;      // T m / A
  static constexpr double eps0 = 8.8541878128e-12;     // F / m
  static constexpr double hbar = 1.054571817e-34;      // J s
  static constexpr double k_boltzmann = 1.380649e-23;  // J / K
  static constexpr double gamma_e = -1.76085963023e11; // rad / (s T), signed
  static constexpr double eps_d = 5.7;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Internal unit system: lengths in nm, times in us, angular frequencies in
// rad/us, magnetic fields in Tesla internally (Gauss at the interfaces).
enum class Unit {
  nm,
  angstrom,
  us,
  ns,
  rad_per_us,
  megahertz,
  gauss,
  tesla,
  kelvin,
};

Unit unit_from_string(const std::string& name);
std::string unit_to_string(Unit u);

// Exact conversion by fixed factors; throws ConfigError for unknown pairs
// (units of different dimension).
double unit_convert(double value, Unit from, Unit to);

inline double gauss_to_tesla(double g) { return g * 1e-4; }
inline double mhz_to_rad_us(double mhz) { return mhz * kTwoPi; }

// Larmor angular frequency in rad/us for gamma in rad/(s T) and B in Tesla.
inline double larmor_rad_us(double gamma_si, double b_tesla) {
  return gamma_si * b_tesla * 1e-6;
}

}  // namespace spinbath
