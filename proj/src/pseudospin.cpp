#include "spinbath/pseudospin.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spinbath {

PseudoSpinPair pair_params(const CentralSpin& nv, const BathSpin& a,
                           const BathSpin& b, const Vec3& field_dir) {
  PseudoSpinPair p;
  p.i = a.id;
  p.j = b.id;
  p.omega = axial_coupling(nv, a, field_dir) - axial_coupling(nv, b, field_dir);
  p.delta = 0.5 * flipflop_coupling(a, b, field_dir);
  const double d2 = p.omega * p.omega + p.delta * p.delta;
  p.kappa = d2 > 0.0 ? p.omega * p.omega / d2 : 0.0;
  p.pair_separation_nm = (a.position - b.position).norm();
  return p;
}

namespace {

double pair_value(const PseudoSpinPair& p, double t, PairFormula f) {
  const double rabi = std::hypot(p.omega, p.delta);
  const double s1 = std::sin(0.5 * rabi * t);
  const double arg2 = (f == PairFormula::resolved)
                          ? 0.5 * p.delta * t
                          : 0.5 * p.delta * p.delta * t;
  const double s2 = std::sin(arg2);
  return 1.0 - p.kappa * s1 * s1 * s2 * s2;
}

}  // namespace

CoherenceCurve pair_coherence(const PseudoSpinPair& pair,
                              const std::vector<double>& times_us,
                              PairFormula formula) {
  CoherenceCurve c;
  c.times_us = times_us;
  c.method = "pseudospin";
  c.order = 2;
  c.values.reserve(times_us.size());
  for (double t : times_us)
    c.values.push_back(cxd(pair_value(pair, t, formula), 0.0));
  return c;
}

CoherenceCurve product_coherence(const std::vector<PseudoSpinPair>& pairs,
                                 const std::vector<double>& times_us,
                                 PairFormula formula) {
  CoherenceCurve c;
  c.times_us = times_us;
  c.method = "pseudospin";
  c.order = 2;
  c.values.assign(times_us.size(), cxd(1.0, 0.0));
  for (std::size_t ti = 0; ti < times_us.size(); ++ti) {
    double v = 1.0;
    for (const PseudoSpinPair& p : pairs)
      v *= pair_value(p, times_us[ti], formula);
    c.values[ti] = cxd(v, 0.0);
  }
  return c;
}

std::vector<PseudoSpinPair> strongest_pairs(const CentralSpin& nv,
                                            const BathRealization& bath,
                                            const Vec3& field_dir, int count,
                                            double pair_radius_nm) {
  // sort spins by distance to the central spin, pair within the radius
  std::vector<int> order(bath.spins.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return (bath.spins[a].position - nv.position).squaredNorm() <
           (bath.spins[b].position - nv.position).squaredNorm();
  });

  std::vector<PseudoSpinPair> pairs;
  for (std::size_t a = 0; a < order.size() && static_cast<int>(pairs.size()) < count; ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const BathSpin& sa = bath.spins[order[a]];
      const BathSpin& sb = bath.spins[order[b]];
      if (pair_radius_nm > 0.0 &&
          (sa.position - sb.position).norm() > pair_radius_nm)
        continue;
      pairs.push_back(pair_params(nv, sa, sb, field_dir));
      if (static_cast<int>(pairs.size()) >= count) break;
    }
  // strongest flip-flop first
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    return std::abs(x.delta) > std::abs(y.delta);
  });
  return pairs;
}

std::vector<DepthScanRow> pseudospin_depth_scan(
    const SurfaceConfig& surface, const std::vector<double>& depths_nm,
    std::uint64_t seed, int pair_count, double b_gauss) {
  SurfaceConfig cfg = surface;
  cfg.seed = seed;
  const BathRealization bath = sample_surface_electrons(cfg);
  if (bath.spins.size() < 2)
    throw ConfigError("pseudospin scan needs at least two surface spins");

  std::vector<DepthScanRow> rows;
  int dominant_i = -1, dominant_j = -1;
  for (double d : depths_nm) {
    NVPlacement place;
    place.depth_nm = d;
    auto [nv, field] = place_nv(cfg, place, b_gauss);
    const Vec3 field_dir = field.b_gauss.normalized();
    std::vector<PseudoSpinPair> pairs =
        strongest_pairs(nv, bath, field_dir, pair_count);
    if (pairs.empty()) throw ConfigError("no pseudo-spin pairs in range");

    // lock the dominant pair at the first depth so the scan follows one pair
    if (dominant_i < 0) {
      dominant_i = pairs.front().i;
      dominant_j = pairs.front().j;
    }
    DepthScanRow row;
    row.depth_nm = d;
    for (const PseudoSpinPair& p : pairs)
      if ((p.i == dominant_i && p.j == dominant_j) ||
          (p.i == dominant_j && p.j == dominant_i)) {
        row.omega_signed = p.omega;
        break;
      }

    // 1/e crossing of the product model on a generous grid
    TimeGrid grid;
    grid.t_min_us = 0.01;
    grid.t_max_us = 1e5;
    grid.points_per_decade = 32;
    const std::vector<double> times = grid.times();
    const CoherenceCurve curve = product_coherence(pairs, times);
    row.t2_us = times.back();
    const double target = std::exp(-1.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (std::abs(curve.values[k]) <= target) {
        row.t2_us = times[k];
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spinbath
