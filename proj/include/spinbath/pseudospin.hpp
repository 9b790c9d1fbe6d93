#pragma once

#include "spinbath/cce.hpp"
#include "spinbath/couplings.hpp"
#include "spinbath/geometry.hpp"

#include <vector>

namespace spinbath {

// Two-level mapping of a flip-flopping bath pair. omega is kept signed
// (difference of the axial couplings); delta stores half the bare pair
// flip-flop coupling so that the closed-form echo expression below is exact
// for the {0, -1} conditioned branches.
struct PseudoSpinPair {
  int i = 0, j = 0;
  double omega = 0.0;  // rad/us, signed
  double delta = 0.0;  // rad/us
  double kappa = 0.0;  // omega^2 / (omega^2 + delta^2)
  double pair_separation_nm = 0.0;
};

// Which reading of the printed pair-coherence expression to evaluate. The
// `resolved` form is the one that matches exact two-spin evolution; the
// `printed` form (second factor squared frequency) is kept for comparison.
enum class PairFormula { resolved, printed };

PseudoSpinPair pair_params(const CentralSpin& nv, const BathSpin& a,
                           const BathSpin& b, const Vec3& field_dir);

// Hahn-echo pair coherence on a time grid:
//   L(t) = 1 - kappa sin^2(sqrt(omega^2+delta^2) t/2) sin^2(delta t/2).
CoherenceCurve pair_coherence(const PseudoSpinPair& pair,
                              const std::vector<double>& times_us,
                              PairFormula formula = PairFormula::resolved);

// Pointwise product over pairs.
CoherenceCurve product_coherence(const std::vector<PseudoSpinPair>& pairs,
                                 const std::vector<double>& times_us,
                                 PairFormula formula = PairFormula::resolved);

// Build the pair list for a realization: the `count` strongest flip-flop
// coupled pairs among bath spins, nearest the central spin first.
std::vector<PseudoSpinPair> strongest_pairs(const CentralSpin& nv,
                                            const BathRealization& bath,
                                            const Vec3& field_dir,
                                            int count = 200,
                                            double pair_radius_nm = 0.0);

// Depth scan of the dominant pair's signed omega and the product-model T2.
struct DepthScanRow {
  double depth_nm = 0.0;
  double omega_signed = 0.0;  // rad/us, dominant pair
  double t2_us = 0.0;         // 1/e time of the product coherence
};

std::vector<DepthScanRow> pseudospin_depth_scan(
    const SurfaceConfig& surface, const std::vector<double>& depths_nm,
    std::uint64_t seed, int pair_count = 200, double b_gauss = 400.0);

}  // namespace spinbath
