#pragma once

#include "spinbath/analysis.hpp"

#include <cstdint>
#include <functional>

namespace spinbath {

struct EnsembleOptions {
  int n_configs = 1;
  std::uint64_t seed = 1;
  int workers = 0;
  FitOptions fit;
  bool keep_curves = false;
};

struct EnsembleResult {
  CoherenceCurve mean;
  EnsembleStats stats;
  std::vector<CoherenceCurve> curves;  // populated when keep_curves
};

// Runs n independent realizations with per-member seeds derived from the
// root seed, averages the coherence pointwise (fixed member order) and fits
// each realization. Member curves that cannot be fitted (no decay on the
// grid) contribute to the mean but carry no fit row.
using MemberRunner =
    std::function<CoherenceCurve(std::uint64_t member_seed, int index)>;

EnsembleResult ensemble_coherence(const MemberRunner& run,
                                  const EnsembleOptions& opt);

}  // namespace spinbath
