#pragma once

#include "spinbath/hamiltonian.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spinbath {

// A subset of bath sites, members sorted ascending.
struct Cluster {
  std::vector<int> members;
  int order() const { return static_cast<int>(members.size()); }
};

// All connected subsets of size <= max_order, where two sites are connected
// when closer than connect_radius(i, j). Deterministic ordering (by order,
// then lexicographic). Throws SizeError beyond `budget` clusters.
std::vector<Cluster> enumerate_clusters(
    const std::vector<Vec3>& positions, int max_order,
    const std::function<double(int, int)>& connect_radius,
    std::size_t budget = 5000000, double max_radius_hint = 0.0);

std::vector<Cluster> enumerate_clusters(const BathRealization& bath,
                                        int max_order, double r_connect_nm,
                                        std::size_t budget = 5000000);

// Log-spaced evaluation grid; t = 0 is always included as the first point.
// When lock_period_us > 0 every time is snapped to the nearest positive
// integer multiple of the period: sampling nuclear-bath echoes at the bare
// Larmor revivals removes the envelope-obscuring ESEEM beats.
struct TimeGrid {
  double t_min_us = 0.1;
  double t_max_us = 1e4;
  int points_per_decade = 64;
  double lock_period_us = 0.0;

  std::vector<double> times() const;
};

// Hahn-echo revival period 4 pi / |gamma B| of a nuclear species, us.
double revival_period_us(const SpinSpecies& species, double b_gauss);

struct CoherenceCurve {
  std::vector<double> times_us;
  std::vector<cxd> values;
  std::string method;
  int order = 0;
  std::uint64_t seed = 0;
  long divisor_guard_hits = 0;
  long clip_hits = 0;

  std::vector<double> magnitudes() const;
};

struct CceOptions {
  int max_order = 2;
  // pairwise connectivity radii by species category
  double r_connect_electron_nm = 8.0;
  double r_connect_nuclear_nm = 0.9;
  double r_connect_mixed_nm = 2.0;
  double r_connect_hop_nm = 0.0;  // >0 overrides for spin/hole site graphs
  // drop bath sites farther than this from the central spin (0 = keep all)
  double nv_cutoff_nm = 0.0;
  double divisor_guard = 1e-6;
  std::size_t cluster_budget = 5000000;
  int level0_m = 0;    // tracked central levels (m values)
  int level1_m = -1;
  double gibbs_temperature_k = 0.0;  // 0 = maximally mixed bath
  int workers = 0;
  TimeGrid grid;
};

double connect_radius_for(const SpinSpecies& a, const SpinSpecies& b,
                          const CceOptions& opt);

// Initial single-site populations (diagonal), maximally mixed or Gibbs.
Eigen::VectorXd initial_populations(const SpinSpecies& s, const CceOptions& opt,
                                    double b_tesla_z);

// Conventional CCE: bath conditioned on the two tracked central levels.
CoherenceCurve cce_coherence(const BathRealization& bath, const CentralSpin& nv,
                             const ExternalField& field,
                             const PulseSequence& seq, const CceOptions& opt);

// Generalized CCE: the full central Hilbert space is retained per cluster.
CoherenceCurve gcce_coherence(const BathRealization& bath,
                              const CentralSpin& nv,
                              const ExternalField& field,
                              const PulseSequence& seq, const CceOptions& opt);

// Position-canonical member ordering used when assembling cluster matrices
// so results are independent of bath numbering.
std::vector<int> canonical_order(const std::vector<int>& members,
                                 const std::vector<Vec3>& positions);

// Shared irreducible-product assembly: raw per-cluster curves in, total
// coherence out (division guard per the options).
std::vector<cxd> assemble_cce_product(
    const std::vector<Cluster>& clusters,
    const std::vector<std::vector<cxd>>& raw, std::size_t n_times,
    double divisor_guard, long* guard_hits, long* clip_hits);

}  // namespace spinbath
