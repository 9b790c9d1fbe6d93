#pragma once

#include "spinbath/rng.hpp"
#include "spinbath/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spinbath {

// Lab frame convention: the surface is the z = 0 plane, diamond occupies
// z < 0, the central spin sits at negative z.

enum class Orientation { o100, o110, o111, o113 };
enum class Termination { bare, hydrogen, fluorine, oxygen, nitrogen };

Orientation orientation_from_string(const std::string& s);
Termination termination_from_string(const std::string& s);
std::string to_string(Orientation o);
std::string to_string(Termination t);

// Tilt of the <111> quantization axis from the surface normal, degrees.
double facet_axis_tilt_deg(Orientation o);

struct SurfaceConfig {
  Orientation orientation = Orientation::o100;
  Termination termination = Termination::bare;
  double electron_density_nm2 = 0.0;  // areal site density rho
  double hole_fraction = 0.0;         // p_h in [0, 1]
  double lateral_extent_nm = 0.0;     // 0 -> auto (40 / sqrt(rho))
  std::uint64_t seed = 1;
};

struct NVPlacement {
  double depth_nm = 5.0;
  double axis_tilt_deg = 0.0;  // from surface normal; default set by facet
  bool tilt_overridden = false;
};

// A generated bath: spins plus vacant (hole) sites, with provenance.
struct BathRealization {
  std::vector<BathSpin> spins;
  std::vector<Vec3> holes;
  std::uint64_t seed = 0;
  std::string provenance;
};

constexpr double kDiamondLatticeConstantNm = 0.3567;
constexpr double kCarbonSiteDensityNm3 = 8.0 / (kDiamondLatticeConstantNm *
                                                kDiamondLatticeConstantNm *
                                                kDiamondLatticeConstantNm);

// Region for bulk sampling: a sphere around `center`, optionally truncated
// at the surface plane (keep z < 0 only).
struct BulkRegion {
  Vec3 center = Vec3::Zero();
  double radius_nm = 6.0;
  bool truncate_at_surface = false;
};

// Occupy each diamond-lattice carbon site inside the region independently
// with probability `abundance`. Deterministic for a given seed.
BathRealization sample_bulk_c13(const BulkRegion& region, double abundance,
                                std::uint64_t seed);

// Count of candidate lattice sites in the region (occupancy oracle support).
std::size_t count_lattice_sites(const BulkRegion& region);

// Monolayer of terminating nuclear spins at z = 0 arranged per facet.
// `lateral_radius_nm` bounds the patch around the origin. Sites of
// low-abundance isotopes are occupied stochastically with the seed.
BathRealization generate_surface_lattice(Orientation orientation,
                                         Termination termination,
                                         double lateral_radius_nm,
                                         std::uint64_t seed);

// Uniform random surface electrons at areal density rho on z = 0; a
// fraction hole_fraction of generated sites are vacancies. Throws SizeError
// if rho * area exceeds the site budget.
BathRealization sample_surface_electrons(const SurfaceConfig& config,
                                         std::size_t site_budget = 2000000);

// Central spin at (0, 0, -depth) with the facet-appropriate axis tilt and
// the magnetic field aligned with the axis.
std::pair<CentralSpin, ExternalField> place_nv(const SurfaceConfig& surface,
                                               const NVPlacement& placement,
                                               double b_gauss = 400.0);

// Merge realizations (ids are re-assigned consecutively).
BathRealization merge(const BathRealization& a, const BathRealization& b);

// Keep only spins within radius_nm of `center` (holes kept likewise).
BathRealization restrict_to_ball(const BathRealization& bath, const Vec3& center,
                                 double radius_nm);

// Text table I/O: columns `id species x_nm y_nm z_nm kind` plus optional
// 9-entry hyperfine and 9-entry quadrupole tensors (rad/us, row-major).
// Lines starting with '#' are comments.
void write_bath_file(std::ostream& os, const BathRealization& bath);
void write_bath_file(const std::string& path, const BathRealization& bath);
BathRealization read_bath_file(std::istream& is);
BathRealization read_bath_file(const std::string& path);

}  // namespace spinbath
