#include "spinbath/ensemble.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/threading.hpp"

namespace spinbath {

EnsembleResult ensemble_coherence(const MemberRunner& run,
                                  const EnsembleOptions& opt) {
  if (opt.n_configs < 1) throw ConfigError("ensemble needs n_configs >= 1");
  std::vector<CoherenceCurve> curves(opt.n_configs);
  parallel_for(opt.n_configs, opt.workers, [&](std::size_t i) {
    curves[i] = run(task_seed(opt.seed, static_cast<std::uint64_t>(i)),
                    static_cast<int>(i));
  });

  EnsembleResult out;
  out.mean = mean_curve(curves);
  std::vector<FitResult> fits;
  for (const CoherenceCurve& c : curves) {
    try {
      fits.push_back(fit_stretched(c, opt.fit));
    } catch (const NumericError&) {
      // no decay on the grid for this realization; skip its fit row
    }
  }
  if (!fits.empty()) out.stats = aggregate(fits);
  out.stats.n_configs = static_cast<int>(fits.size());
  if (opt.keep_curves) out.curves = std::move(curves);
  return out;
}

}  // namespace spinbath
