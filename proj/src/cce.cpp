#include "spinbath/cce.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/threading.hpp"
#include "spinbath/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace spinbath {

namespace {

// Neighbor lists under a pairwise connectivity radius. r_max must bound
// connect_radius over all pairs.
std::vector<std::vector<int>> adjacency(
    const std::vector<Vec3>& positions,
    const std::function<double(int, int)>& connect_radius, double r_max) {
  const int n = static_cast<int>(positions.size());
  std::vector<std::vector<int>> adj(n);
  if (n == 0 || r_max <= 0.0) return adj;

  std::map<std::tuple<long, long, long>, std::vector<int>> cells;
  auto cell_of = [&](const Vec3& p) {
    return std::make_tuple(static_cast<long>(std::floor(p.x() / r_max)),
                           static_cast<long>(std::floor(p.y() / r_max)),
                           static_cast<long>(std::floor(p.z() / r_max)));
  };
  for (int i = 0; i < n; ++i) cells[cell_of(positions[i])].push_back(i);
  for (int i = 0; i < n; ++i) {
    const auto [cx, cy, cz] = cell_of(positions[i]);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          const auto it = cells.find({cx + dx, cy + dy, cz + dz});
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            const double r = (positions[i] - positions[j]).norm();
            if (r <= connect_radius(i, j)) {
              adj[i].push_back(j);
              adj[j].push_back(i);
            }
          }
        }
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());
  return adj;
}

// ESU-style enumeration of connected subsets of size <= k rooted at their
// minimum vertex; each subset is produced exactly once.
void extend_subgraph(std::vector<int>& subset, std::vector<int> extension,
                     std::vector<char>& seen, int root, int max_order,
                     const std::vector<std::vector<int>>& adj,
                     std::vector<Cluster>& out, std::size_t budget) {
  if (out.size() > budget)
    throw SizeError("cluster enumeration exceeded budget of " +
                    std::to_string(budget) + " clusters");
  out.push_back(Cluster{subset});
  if (static_cast<int>(subset.size()) == max_order) return;
  while (!extension.empty()) {
    const int w = extension.back();
    extension.pop_back();
    std::vector<int> next_ext = extension;
    std::vector<int> newly;
    for (int u : adj[w]) {
      if (u <= root || seen[u]) continue;
      seen[u] = 1;
      newly.push_back(u);
      next_ext.push_back(u);
    }
    subset.push_back(w);
    extend_subgraph(subset, std::move(next_ext), seen, root, max_order, adj,
                    out, budget);
    subset.pop_back();
    for (int u : newly) seen[u] = 0;
  }
}

}  // namespace

std::vector<Cluster> enumerate_clusters(
    const std::vector<Vec3>& positions, int max_order,
    const std::function<double(int, int)>& connect_radius, std::size_t budget,
    double max_radius_hint) {
  if (max_order < 1) throw ConfigError("cluster order must be >= 1");
  const int n = static_cast<int>(positions.size());
  double r_max = max_radius_hint;
  if (r_max <= 0.0)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        r_max = std::max(r_max, connect_radius(i, j));
  const auto adj = adjacency(positions, connect_radius, r_max);
  std::vector<Cluster> out;
  std::vector<char> seen(n, 0);
  for (int v = 0; v < n; ++v) {
    std::vector<int> subset = {v};
    std::vector<int> ext;
    for (int u : adj[v])
      if (u > v) {
        ext.push_back(u);
        seen[u] = 1;
      }
    extend_subgraph(subset, ext, seen, v, max_order, adj, out, budget);
    for (int u : adj[v])
      if (u > v) seen[u] = 0;
  }
  for (Cluster& c : out) std::sort(c.members.begin(), c.members.end());
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.members.size() != b.members.size())
      return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

std::vector<Cluster> enumerate_clusters(const BathRealization& bath,
                                        int max_order, double r_connect_nm,
                                        std::size_t budget) {
  std::vector<Vec3> pos;
  pos.reserve(bath.spins.size());
  for (const BathSpin& s : bath.spins) pos.push_back(s.position);
  return enumerate_clusters(
      pos, max_order, [r_connect_nm](int, int) { return r_connect_nm; },
      budget, r_connect_nm);
}

std::vector<double> TimeGrid::times() const {
  if (t_min_us <= 0.0 || t_max_us <= t_min_us || points_per_decade < 1)
    throw ConfigError("invalid time grid");
  std::vector<double> t = {0.0};
  const double decades = std::log10(t_max_us / t_min_us);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  if (lock_period_us <= 0.0) {
    for (int i = 0; i < n; ++i)
      t.push_back(t_min_us * std::pow(10.0, decades * i / (n - 1)));
    return t;
  }
  long prev = 0;
  for (int i = 0; i < n; ++i) {
    const double target = t_min_us * std::pow(10.0, decades * i / (n - 1));
    long m = std::lround(target / lock_period_us);
    if (m <= prev) m = prev + 1;
    const double snapped = m * lock_period_us;
    if (snapped > t_max_us * 1.05) break;
    t.push_back(snapped);
    prev = m;
  }
  return t;
}

double revival_period_us(const SpinSpecies& species, double b_gauss) {
  const double w = std::abs(larmor_rad_us(species.gamma, b_gauss * 1e-4));
  if (w <= 0.0) throw ConfigError("revival period undefined at zero field");
  return 4.0 * kPi / w;
}

std::vector<double> CoherenceCurve::magnitudes() const {
  std::vector<double> m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m[i] = std::abs(values[i]);
  return m;
}

std::vector<int> canonical_order(const std::vector<int>& members,
                                 const std::vector<Vec3>& positions) {
  std::vector<int> out = members;
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const Vec3& pa = positions[a];
    const Vec3& pb = positions[b];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.z() < pb.z();
  });
  return out;
}

double connect_radius_for(const SpinSpecies& a, const SpinSpecies& b,
                          const CceOptions& opt) {
  const bool ea = a.is_electron();
  const bool eb = b.is_electron();
  if (ea && eb) return opt.r_connect_electron_nm;
  if (!ea && !eb) return opt.r_connect_nuclear_nm;
  return opt.r_connect_mixed_nm;
}

Eigen::VectorXd initial_populations(const SpinSpecies& s, const CceOptions& opt,
                                    double b_tesla_z) {
  const int d = s.dim();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d, 1.0 / d);
  if (opt.gibbs_temperature_k > 0.0) {
    // E_m = hbar gamma B m; populations ~ exp(-E_m / kT)
    const double beta_e = PhysicalConstants::hbar * s.gamma * b_tesla_z /
                          (PhysicalConstants::k_boltzmann *
                           opt.gibbs_temperature_k);
    double z = 0.0;
    for (int i = 0; i < d; ++i) {
      const double m = s.spin - i;
      w(i) = std::exp(-beta_e * m);
      z += w(i);
    }
    w /= z;
  }
  return w;
}

namespace {

struct Prepared {
  BathView view;
  std::vector<Cluster> clusters;
  std::vector<Eigen::VectorXd> populations;  // per bath spin
};

Prepared prepare(const BathRealization& bath, const CentralSpin& nv,
                 const ExternalField& field, const CceOptions& opt) {
  Prepared p;
  BathRealization reduced =
      opt.nv_cutoff_nm > 0.0
          ? restrict_to_ball(bath, nv.position, opt.nv_cutoff_nm)
          : bath;
  p.view = make_view(nv, field, reduced);
  std::vector<Vec3> pos;
  pos.reserve(p.view.spins.size());
  for (const BathSpin& s : p.view.spins) pos.push_back(s.position);
  const auto& spins = p.view.spins;
  const double r_hint =
      std::max({opt.r_connect_electron_nm, opt.r_connect_nuclear_nm,
                opt.r_connect_mixed_nm, opt.r_connect_hop_nm});
  p.clusters = enumerate_clusters(
      pos, opt.max_order,
      [&spins, &opt](int i, int j) {
        return connect_radius_for(spins[i].species, spins[j].species, opt);
      },
      opt.cluster_budget, r_hint);
  p.populations.reserve(spins.size());
  for (const BathSpin& s : spins)
    p.populations.push_back(
        initial_populations(s.species, opt, p.view.b_tesla.z()));
  return p;
}

Eigen::VectorXd cluster_populations(const Prepared& p, const Cluster& c) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  for (int idx : c.members) {
    const Eigen::VectorXd& wi = p.populations[idx];
    Eigen::VectorXd next(w.size() * wi.size());
    for (Eigen::Index a = 0; a < w.size(); ++a)
      for (Eigen::Index b = 0; b < wi.size(); ++b)
        next(a * wi.size() + b) = w(a) * wi(b);
    w = std::move(next);
  }
  return w;
}

// Tr[U_A diag(w) U_B^dagger] without forming the product.
cxd weighted_overlap(const MatrixXcd& u_a, const MatrixXcd& u_b,
                     const Eigen::VectorXd& w) {
  cxd acc = 0.0;
  for (Eigen::Index b = 0; b < u_a.cols(); ++b) {
    cxd col = 0.0;
    for (Eigen::Index a = 0; a < u_a.rows(); ++a)
      col += u_a(a, b) * std::conj(u_b(a, b));
    acc += w(b) * col;
  }
  return acc;
}

}  // namespace

std::vector<cxd> assemble_cce_product(
    const std::vector<Cluster>& clusters,
    const std::vector<std::vector<cxd>>& raw, std::size_t n_times,
    double divisor_guard, long* guard_hits, long* clip_hits) {
  // irreducible contributions, memoized by sorted member list
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t k = 0; k < clusters.size(); ++k)
    index[clusters[k].members] = k;

  std::vector<std::vector<cxd>> irreducible(clusters.size());
  long guards = 0;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const Cluster& c = clusters[k];
    std::vector<cxd> tilde = raw[k];
    const int n = c.order();
    if (n > 1) {
      // divide by every enumerated proper subcluster
      const int subsets = (1 << n) - 1;
      for (int mask = 1; mask < subsets; ++mask) {
        std::vector<int> sub;
        for (int b = 0; b < n; ++b)
          if (mask & (1 << b)) sub.push_back(c.members[b]);
        const auto it = index.find(sub);
        if (it == index.end()) continue;
        const std::vector<cxd>& div = irreducible[it->second];
        for (std::size_t ti = 0; ti < n_times; ++ti) {
          if (std::abs(div[ti]) < divisor_guard) {
            ++guards;
            continue;
          }
          tilde[ti] /= div[ti];
        }
      }
    }
    irreducible[k] = std::move(tilde);
  }

  std::vector<cxd> total(n_times, cxd(1.0, 0.0));
  for (std::size_t k = 0; k < clusters.size(); ++k)
    for (std::size_t ti = 0; ti < n_times; ++ti) total[ti] *= irreducible[k][ti];

  long clips = 0;
  for (std::size_t ti = 0; ti < n_times; ++ti) {
    const double mag = std::abs(total[ti]);
    if (mag > 1.0 + 1e-9) {
      total[ti] /= mag;
      ++clips;
    }
  }
  if (guard_hits) *guard_hits = guards;
  if (clip_hits) *clip_hits = clips;
  return total;
}

CoherenceCurve cce_coherence(const BathRealization& bath, const CentralSpin& nv,
                             const ExternalField& field,
                             const PulseSequence& seq, const CceOptions& opt) {
  Prepared p = prepare(bath, nv, field, opt);
  const std::vector<double> times = opt.grid.times();
  const std::size_t n_t = times.size();

  std::vector<Vec3> spin_pos;
  spin_pos.reserve(p.view.spins.size());
  for (const BathSpin& s : p.view.spins) spin_pos.push_back(s.position);

  std::vector<std::vector<cxd>> raw(p.clusters.size());
  parallel_for(p.clusters.size(), opt.workers, [&](std::size_t k) {
    const std::vector<int> members =
        canonical_order(p.clusters[k].members, spin_pos);
    const ClusterSpec spec = make_cluster_spec(p.view, members);
    const ConditionedPair h =
        conditioned_pair(spec, static_cast<double>(opt.level0_m),
                         static_cast<double>(opt.level1_m));
    const HermitianExp e0(h.h0), e1(h.h1);
    const Eigen::VectorXd w = cluster_populations(p, Cluster{members});
    std::vector<cxd> curve(n_t);
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      if (times[ti] == 0.0) {
        curve[ti] = 1.0;
        continue;
      }
      const BranchPropagators u =
          conditioned_propagators(e0, e1, seq, times[ti]);
      curve[ti] = weighted_overlap(u.u_a, u.u_b, w);
    }
    raw[k] = std::move(curve);
  });

  CoherenceCurve out;
  out.times_us = times;
  out.method = "cce";
  out.order = opt.max_order;
  out.seed = bath.seed;
  out.values = assemble_cce_product(p.clusters, raw, n_t, opt.divisor_guard,
                                    &out.divisor_guard_hits, &out.clip_hits);
  return out;
}

CoherenceCurve gcce_coherence(const BathRealization& bath,
                              const CentralSpin& nv, const ExternalField& field,
                              const PulseSequence& seq, const CceOptions& opt) {
  Prepared p = prepare(bath, nv, field, opt);
  const std::vector<double> times = opt.grid.times();
  const std::size_t n_t = times.size();

  const MatrixXcd h_central = build_central(nv, field);
  const CentralSubspace sub =
      central_subspace(h_central, opt.level0_m, opt.level1_m);

  // order-0 factor: the central spin alone
  std::vector<cxd> l0(n_t, cxd(1.0, 0.0));
  {
    const HermitianExp ec(h_central);
    std::vector<MatrixXcd> pulses;
    for (double ph : seq.phases_rad) pulses.push_back(sub.pulse(ph));
    const VectorXcd psi0 = (sub.u0 + sub.u1) / std::sqrt(2.0);
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      if (times[ti] == 0.0) continue;
      const MatrixXcd u = sequence_propagator(ec, seq, times[ti], pulses);
      const VectorXcd psi = u * psi0;
      const cxd val = (sub.u0.adjoint() * psi)(0) *
                      std::conj((sub.u1.adjoint() * psi)(0));
      l0[ti] = val / cxd(0.5, 0.0);
    }
  }

  // per-cluster factors on the full (central x cluster) space
  std::vector<Vec3> spin_pos;
  spin_pos.reserve(p.view.spins.size());
  for (const BathSpin& s : p.view.spins) spin_pos.push_back(s.position);

  std::vector<std::vector<cxd>> raw(p.clusters.size());
  parallel_for(p.clusters.size(), opt.workers, [&](std::size_t k) {
    const std::vector<int> members =
        canonical_order(p.clusters[k].members, spin_pos);
    const ClusterSpec spec = make_cluster_spec(p.view, members);
    const int db = spec.dim();
    const MatrixXcd id_b = MatrixXcd::Identity(db, db);
    MatrixXcd h = kron<cxd>(h_central, id_b);
    h += build_interaction(spec);
    h += kron<cxd>(MatrixXcd::Identity(3, 3), build_bath(spec));
    const HermitianExp eh(h);

    std::vector<MatrixXcd> pulses;
    for (double ph : seq.phases_rad)
      pulses.push_back(kron<cxd>(sub.pulse(ph), id_b));

    const Eigen::VectorXd w = cluster_populations(p, Cluster{members});
    // projector |u1><u0| x I, evaluated as Tr[rho U^dag P U]
    const MatrixXcd proj = kron<cxd>(sub.u1 * sub.u0.adjoint(), id_b);
    const MatrixXcd rho_c = [&] {
      const VectorXcd psi0 = (sub.u0 + sub.u1) / std::sqrt(2.0);
      MatrixXcd rho_nv = psi0 * psi0.adjoint();
      MatrixXcd wb = MatrixXcd::Zero(db, db);
      wb.diagonal() = w.cast<cxd>();
      return kron<cxd>(rho_nv, wb);
    }();

    std::vector<cxd> curve(n_t);
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      if (times[ti] == 0.0) {
        curve[ti] = 1.0;
        continue;
      }
      const MatrixXcd u = sequence_propagator(eh, seq, times[ti], pulses);
      const cxd val = (rho_c * (u.adjoint() * proj * u)).trace();
      const cxd norm = l0[ti] * cxd(0.5, 0.0);
      curve[ti] = std::abs(norm) > 1e-12 ? val / norm : val / cxd(0.5, 0.0);
    }
    raw[k] = std::move(curve);
  });

  CoherenceCurve out;
  out.times_us = times;
  out.method = "gcce";
  out.order = opt.max_order;
  out.seed = bath.seed;
  out.values = assemble_cce_product(p.clusters, raw, n_t, opt.divisor_guard,
                                    &out.divisor_guard_hits, &out.clip_hits);
  // multiply back the order-0 factor
  for (std::size_t ti = 0; ti < n_t; ++ti) out.values[ti] *= l0[ti];
  return out;
}

}  // namespace spinbath
