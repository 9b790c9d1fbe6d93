#include "spinbath/master_equation.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/threading.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>

namespace spinbath {

std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::central_dephase: return "central_dephase";
    case ChannelKind::spin_raise: return "spin_raise";
    case ChannelKind::spin_lower: return "spin_lower";
    case ChannelKind::pair_exchange_up: return "pair_exchange_up";
    case ChannelKind::pair_exchange_down: return "pair_exchange_down";
    case ChannelKind::hop: return "hop";
  }
  return "?";
}

double hop_rate(double r_nm, const HoppingModel& model) {
  if (model.t_hop_us <= 0.0) throw ConfigError("hop time must be positive");
  const double pref =
      model.two_pi_prefactor ? 1.0 / (kTwoPi * model.t_hop_us)
                             : 1.0 / model.t_hop_us;
  return pref * std::exp(-r_nm / model.r_hop_nm);
}

MatrixXcd gibbs_state(const SpinSpecies& species, double temperature_k,
                      double b_tesla_z) {
  if (temperature_k < 0.0) throw ConfigError("temperature must be positive");
  const int d = species.dim();
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  if (temperature_k == 0.0) {
    rho.diagonal().setConstant(cxd(1.0 / d, 0.0));
    return rho;
  }
  const double beta_e = PhysicalConstants::hbar * species.gamma * b_tesla_z /
                        (PhysicalConstants::k_boltzmann * temperature_k);
  double z = 0.0;
  for (int i = 0; i < d; ++i) {
    const double m = species.spin - i;
    const double w = std::exp(-beta_e * m);
    rho(i, i) = w;
    z += w;
  }
  rho /= z;
  return rho;
}

MeSystem make_me_system(const BathView& view, const ChannelConfig& cfg,
                        const CceOptions& opt) {
  MeSystem sys;
  sys.b_tesla = view.b_tesla;
  if (cfg.hopping) {
    // three-level spin/hole mapping; every site couples as an electron
    const double gamma_e = species_by_name("e").gamma;
    const SiteOps ops3 = site_ops_three_level();
    Eigen::VectorXd spin_pops(3), hole_pops(3);
    spin_pops << 0.5, 0.5, 0.0;
    hole_pops << 0.0, 0.0, 1.0;
    auto add_site = [&](const Vec3& pos, bool hole) {
      MeSite s;
      s.position = pos;
      s.gamma = gamma_e;
      s.ops = ops3;
      s.hyperfine = dipolar_prefactor(view.nv.gamma, gamma_e) *
                    dipolar_kernel(pos);
      s.init_pops = hole ? hole_pops : spin_pops;
      s.electron = true;
      s.starts_as_hole = hole;
      sys.sites.push_back(std::move(s));
    };
    for (const BathSpin& b : view.spins) add_site(b.position, false);
    for (const Vec3& h : view.holes) add_site(h, true);
  } else {
    for (std::size_t i = 0; i < view.spins.size(); ++i) {
      const BathSpin& b = view.spins[i];
      MeSite s;
      s.position = b.position;
      s.gamma = b.species.gamma;
      s.ops = site_ops_for_spin(b.species.spin);
      s.hyperfine = view.hyperfine[i];
      s.quadrupole = view.quadrupole[i];
      s.init_pops = initial_populations(b.species, opt, view.b_tesla.z());
      s.electron = b.species.is_electron();
      sys.sites.push_back(std::move(s));
    }
  }
  sys.channels = build_channels(sys, cfg);
  return sys;
}

std::vector<LindbladChannel> build_channels(const MeSystem& system,
                                            const ChannelConfig& cfg) {
  std::vector<LindbladChannel> ch;
  const int n = static_cast<int>(system.sites.size());

  if (cfg.t1_us > 0.0 && std::isfinite(cfg.t1_us)) {
    const double gamma = 1.0 / (kTwoPi * cfg.t1_us);
    for (int i = 0; i < n; ++i) {
      if (!system.sites[i].electron) continue;
      ch.push_back({ChannelKind::spin_raise, {i, -1}, +1, gamma});
      ch.push_back({ChannelKind::spin_lower, {i, -1}, +1, gamma});
    }
  }

  if (cfg.exchange_rate_us > 0.0 && cfg.exchange_radius_nm > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!system.sites[i].electron || !system.sites[j].electron) continue;
        const double r =
            (system.sites[i].position - system.sites[j].position).norm();
        if (r > cfg.exchange_radius_nm) continue;
        ch.push_back({ChannelKind::pair_exchange_up, {i, j}, +1,
                      cfg.exchange_rate_us});
        ch.push_back({ChannelKind::pair_exchange_down, {i, j}, +1,
                      cfg.exchange_rate_us});
      }
  }

  if (cfg.hopping) {
    const double cutoff = cfg.hop.cutoff_factor * cfg.hop.r_hop_nm;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double r =
            (system.sites[i].position - system.sites[j].position).norm();
        if (r > cutoff) continue;
        const double rate = hop_rate(r, cfg.hop);
        ch.push_back({ChannelKind::hop, {i, j}, +1, rate});
        ch.push_back({ChannelKind::hop, {i, j}, -1, rate});
      }
  }
  return ch;
}

namespace {

// Jump operator on the cluster product space for a channel whose targets
// map to local site slots (local index -1 = target outside the cluster).
MatrixXcd channel_operator(const LindbladChannel& ch,
                           const std::vector<const MeSite*>& sites,
                           const std::vector<int>& local,
                           const std::vector<int>& dims) {
  auto hop_k = [](int s, bool create) {
    // three-level basis: 0 = spin up, 1 = spin down, 2 = hole
    MatrixXcd k = MatrixXcd::Zero(3, 3);
    const int spin_idx = (s > 0) ? 0 : 1;
    if (create)
      k(spin_idx, 2) = 1.0;  // |s><hole|
    else
      k(2, spin_idx) = 1.0;  // |hole><s|
    return k;
  };
  switch (ch.kind) {
    case ChannelKind::spin_raise:
      return embed<cxd>(sites[local[0]]->ops.sp, local[0], dims);
    case ChannelKind::spin_lower:
      return embed<cxd>(sites[local[0]]->ops.sm, local[0], dims);
    case ChannelKind::pair_exchange_up:
      return embed2<cxd>(sites[local[0]]->ops.sp, local[0],
                         sites[local[1]]->ops.sm, local[1], dims);
    case ChannelKind::pair_exchange_down:
      return embed2<cxd>(sites[local[0]]->ops.sm, local[0],
                         sites[local[1]]->ops.sp, local[1], dims);
    case ChannelKind::hop:
      // moves spin s from site targets[0] into a hole at targets[1]
      return embed2<cxd>(hop_k(ch.hop_spin, false), local[0],
                         hop_k(ch.hop_spin, true), local[1], dims);
    case ChannelKind::central_dephase:
      throw ConfigError("central dephasing is handled analytically");
  }
  throw ConfigError("unknown channel kind");
}

ClusterSpec cluster_spec_from_sites(const MeSystem& sys,
                                    const std::vector<int>& members) {
  ClusterSpec c;
  c.b_tesla = sys.b_tesla;
  for (int idx : members) {
    const MeSite& s = sys.sites[idx];
    c.ids.push_back(idx);
    c.ops.push_back(s.ops);
    c.positions.push_back(s.position);
    c.gamma.push_back(s.gamma);
    c.hyperfine.push_back(s.hyperfine);
    c.quadrupole.push_back(s.quadrupole);
  }
  return c;
}

std::vector<int> reachable_states(const std::vector<const MatrixXcd*>& ops,
                                  const std::vector<int>& seeds, int dim) {
  std::vector<char> active(dim, 0);
  std::vector<int> queue = seeds;
  for (int s : seeds) active[s] = 1;
  while (!queue.empty()) {
    const int j = queue.back();
    queue.pop_back();
    for (const MatrixXcd* m : ops) {
      for (int i = 0; i < dim; ++i) {
        if (!active[i] &&
            (std::abs((*m)(i, j)) > 1e-14 || std::abs((*m)(j, i)) > 1e-14)) {
          active[i] = 1;
          queue.push_back(i);
        }
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < dim; ++i)
    if (active[i]) out.push_back(i);
  return out;
}

MatrixXcd project(const MatrixXcd& m, const std::vector<int>& idx) {
  MatrixXcd out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      out(a, b) = m(idx[a], idx[b]);
  return out;
}

// vec(A X B) = (B^T kron A) vec(X), column-major stacking.
MatrixXcd left_mul(const MatrixXcd& a) {
  const MatrixXcd id = MatrixXcd::Identity(a.rows(), a.cols());
  return kron<cxd>(id, a);
}
MatrixXcd right_mul(const MatrixXcd& b) {
  const MatrixXcd id = MatrixXcd::Identity(b.rows(), b.cols());
  return kron<cxd>(b.transpose(), id);
}

// Generator of d/dt vec(rho) = -i (h_left rho - rho h_right) + sum dissipators.
MatrixXcd liouvillian(const MatrixXcd& h_left, const MatrixXcd& h_right,
                      const std::vector<std::pair<MatrixXcd, double>>& jumps) {
  MatrixXcd g = cxd(0, -1) * (left_mul(h_left) - right_mul(h_right));
  for (const auto& [l, rate] : jumps) {
    if (rate < 0.0) throw ConfigError("negative Lindblad rate");
    if (rate == 0.0) continue;
    const MatrixXcd ldl = l.adjoint() * l;
    g += rate * (kron<cxd>(l.conjugate(), l) - 0.5 * left_mul(ldl) -
                 0.5 * right_mul(ldl));
  }
  return g;
}

}  // namespace

SuperExp::SuperExp(MatrixXcd g) : g_(std::move(g)) {
  const Eigen::Index n = g_.rows();
  if (n >= 16) {
    Eigen::ComplexEigenSolver<MatrixXcd> solver(g_);
    if (solver.info() == Eigen::Success) {
      MatrixXcd v = solver.eigenvectors();
      Eigen::FullPivLU<MatrixXcd> lu(v);
      if (lu.isInvertible()) {
        MatrixXcd vinv = lu.inverse();
        const MatrixXcd recon =
            v * solver.eigenvalues().asDiagonal() * vinv;
        if ((recon - g_).norm() <= 1e-10 * std::max(1.0, g_.norm())) {
          v_ = std::move(v);
          v_inv_ = std::move(vinv);
          lambda_ = solver.eigenvalues();
          use_eig_ = true;
        }
      }
    }
  }
}

MatrixXcd SuperExp::at(double tau) const {
  if (tau == 0.0) return MatrixXcd::Identity(g_.rows(), g_.cols());
  if (use_eig_) {
    VectorXcd ph(lambda_.size());
    for (Eigen::Index i = 0; i < lambda_.size(); ++i)
      ph(i) = std::exp(lambda_(i) * tau);
    return v_ * ph.asDiagonal() * v_inv_;
  }
  return (g_ * tau).exp();
}

std::vector<MatrixXcd> lindblad_propagate(
    const MatrixXcd& h, const std::vector<std::pair<MatrixXcd, double>>& jumps,
    const MatrixXcd& rho0, const PulseSequence& seq,
    const std::vector<MatrixXcd>& pulse_ops, const std::vector<double>& times_us,
    double trace_tol) {
  if (!is_hermitian(h))
    throw NumericError("lindblad_propagate: Hamiltonian is not Hermitian");
  for (const auto& [l, rate] : jumps)
    if (rate < 0.0) throw ConfigError("negative Lindblad rate");
  const Eigen::Index d = h.rows();
  const double tr0 = rho0.trace().real();

  const MatrixXcd g = liouvillian(h, h, jumps);
  SuperExp prop(g);
  std::vector<MatrixXcd> pulse_super;
  for (const MatrixXcd& p : pulse_ops)
    pulse_super.push_back(kron<cxd>(p.conjugate(), p));

  std::vector<MatrixXcd> out;
  out.reserve(times_us.size());
  for (double t : times_us) {
    VectorXcd v = Eigen::Map<const VectorXcd>(rho0.data(), d * d);
    if (t > 0.0) {
      const std::vector<double> durations = seq.segment_durations(t);
      std::map<double, MatrixXcd> memo;
      for (std::size_t k = 0; k < durations.size(); ++k) {
        auto it = memo.find(durations[k]);
        if (it == memo.end())
          it = memo.emplace(durations[k], prop.at(durations[k])).first;
        v = it->second * v;
        if (k + 1 < durations.size()) v = pulse_super[k] * v;
      }
    }
    MatrixXcd rho = Eigen::Map<MatrixXcd>(v.data(), d, d);
    const double drift = std::abs(rho.trace().real() - tr0);
    if (drift > trace_tol)
      throw NumericError("lindblad_propagate: trace drift " +
                         std::to_string(drift));
    out.push_back(std::move(rho));
  }
  return out;
}

namespace {

struct MePrepared {
  MeSystem sys;
  std::vector<Cluster> clusters;
};

MePrepared me_prepare(const BathRealization& bath, const CentralSpin& nv,
                      const ExternalField& field, const CceOptions& opt,
                      const ChannelConfig& cfg) {
  MePrepared p;
  BathRealization reduced =
      opt.nv_cutoff_nm > 0.0
          ? restrict_to_ball(bath, nv.position, opt.nv_cutoff_nm)
          : bath;
  const BathView view = make_view(nv, field, reduced);
  p.sys = make_me_system(view, cfg, opt);

  std::vector<Vec3> pos;
  pos.reserve(p.sys.sites.size());
  for (const MeSite& s : p.sys.sites) pos.push_back(s.position);

  double r_hop_connect = opt.r_connect_hop_nm;
  if (cfg.hopping && r_hop_connect <= 0.0)
    r_hop_connect = cfg.hop.cutoff_factor * cfg.hop.r_hop_nm;

  const auto& sites = p.sys.sites;
  auto radius = [&](int i, int j) {
    if (cfg.hopping) return r_hop_connect;
    const bool ei = sites[i].electron, ej = sites[j].electron;
    if (ei && ej) return opt.r_connect_electron_nm;
    if (!ei && !ej) return opt.r_connect_nuclear_nm;
    return opt.r_connect_mixed_nm;
  };
  const double r_hint =
      std::max({opt.r_connect_electron_nm, opt.r_connect_nuclear_nm,
                opt.r_connect_mixed_nm, r_hop_connect});
  p.clusters = enumerate_clusters(pos, opt.max_order, radius,
                                  opt.cluster_budget, r_hint);
  return p;
}

Eigen::VectorXd site_populations(const MeSystem& sys,
                                 const std::vector<int>& members) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  for (int idx : members) {
    const Eigen::VectorXd& wi = sys.sites[idx].init_pops;
    Eigen::VectorXd next(w.size() * wi.size());
    for (Eigen::Index a = 0; a < w.size(); ++a)
      for (Eigen::Index b = 0; b < wi.size(); ++b)
        next(a * wi.size() + b) = w(a) * wi(b);
    w = std::move(next);
  }
  return w;
}

// Channels fully contained in the cluster, with local slot indices.
std::vector<std::pair<LindbladChannel, std::vector<int>>> cluster_channels(
    const MeSystem& sys, const std::vector<int>& members) {
  std::vector<std::pair<LindbladChannel, std::vector<int>>> out;
  auto local_of = [&](int site) {
    for (std::size_t k = 0; k < members.size(); ++k)
      if (members[k] == site) return static_cast<int>(k);
    return -1;
  };
  for (const LindbladChannel& ch : sys.channels) {
    const int l0 = local_of(ch.targets[0]);
    const int l1 = ch.targets[1] >= 0 ? local_of(ch.targets[1]) : -2;
    if (l0 < 0) continue;
    if (ch.targets[1] >= 0 && l1 < 0) continue;
    out.push_back({ch, {l0, l1}});
  }
  return out;
}

}  // namespace

CoherenceCurve mecce_coherence(const BathRealization& bath,
                               const CentralSpin& nv, const ExternalField& field,
                               const PulseSequence& seq, const CceOptions& opt,
                               const ChannelConfig& cfg) {
  MePrepared p = me_prepare(bath, nv, field, opt, cfg);
  const std::vector<double> times = opt.grid.times();
  const std::size_t n_t = times.size();
  const double m0 = static_cast<double>(opt.level0_m);
  const double m1 = static_cast<double>(opt.level1_m);

  std::vector<Vec3> site_pos;
  site_pos.reserve(p.sys.sites.size());
  for (const MeSite& s : p.sys.sites) site_pos.push_back(s.position);

  std::vector<std::vector<cxd>> raw(p.clusters.size());
  parallel_for(p.clusters.size(), opt.workers, [&](std::size_t k) {
    const std::vector<int> members =
        canonical_order(p.clusters[k].members, site_pos);
    std::vector<const MeSite*> sites;
    for (int idx : members) sites.push_back(&p.sys.sites[idx]);
    const ClusterSpec spec = cluster_spec_from_sites(p.sys, members);
    const std::vector<int> dims = spec.dims();
    const int d = spec.dim();
    const auto chans = cluster_channels(p.sys, members);
    const Eigen::VectorXd w = site_populations(p.sys, members);

    std::vector<cxd> curve(n_t, cxd(1.0, 0.0));
    if (chans.empty()) {
      // closed cluster: unitary branch evolution
      const ConditionedPair h = conditioned_pair(spec, m0, m1);
      const HermitianExp e0(h.h0), e1(h.h1);
      for (std::size_t ti = 0; ti < n_t; ++ti) {
        if (times[ti] == 0.0) continue;
        const BranchPropagators u =
            conditioned_propagators(e0, e1, seq, times[ti]);
        cxd acc = 0.0;
        for (Eigen::Index b = 0; b < u.u_a.cols(); ++b) {
          cxd col = 0.0;
          for (Eigen::Index a = 0; a < u.u_a.rows(); ++a)
            col += u.u_a(a, b) * std::conj(u.u_b(a, b));
          acc += w(b) * col;
        }
        curve[ti] = acc;
      }
      raw[k] = std::move(curve);
      return;
    }

    const ConditionedPair h = conditioned_pair(spec, m0, m1);
    std::vector<std::pair<MatrixXcd, double>> jumps;
    for (const auto& [ch, local] : chans)
      jumps.push_back({channel_operator(ch, sites, local, dims), ch.rate_us});

    // restrict to the subspace reachable from the initial support
    std::vector<const MatrixXcd*> pattern_ops = {&h.h0, &h.h1};
    for (const auto& [l, r] : jumps) pattern_ops.push_back(&l);
    std::vector<int> seeds;
    for (int i = 0; i < d; ++i)
      if (w(i) > 0.0) seeds.push_back(i);
    const std::vector<int> active = reachable_states(pattern_ops, seeds, d);

    MatrixXcd h0r = project(h.h0, active);
    MatrixXcd h1r = project(h.h1, active);
    std::vector<std::pair<MatrixXcd, double>> jr;
    for (const auto& [l, r] : jumps) jr.push_back({project(l, active), r});
    Eigen::VectorXd wr(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) wr(i) = w(active[i]);
    const int dr = static_cast<int>(active.size());

    const SuperExp g_a(liouvillian(h0r, h1r, jr));
    const SuperExp g_b(liouvillian(h1r, h0r, jr));

    for (std::size_t ti = 0; ti < n_t; ++ti) {
      if (times[ti] == 0.0) continue;
      const std::vector<double> durations = seq.segment_durations(times[ti]);
      MatrixXcd rho01 = MatrixXcd::Zero(dr, dr);
      rho01.diagonal() = wr.cast<cxd>();
      VectorXcd v = Eigen::Map<VectorXcd>(rho01.data(), dr * dr);
      std::map<std::pair<int, double>, MatrixXcd> memo;
      for (std::size_t s = 0; s < durations.size(); ++s) {
        const int parity = static_cast<int>(s % 2);
        const auto key = std::make_pair(parity, durations[s]);
        auto it = memo.find(key);
        if (it == memo.end())
          it = memo.emplace(key, (parity == 0 ? g_a : g_b).at(durations[s]))
                   .first;
        v = it->second * v;
      }
      cxd tr = 0.0;
      for (int i = 0; i < dr; ++i) tr += v(i * dr + i);
      curve[ti] = tr;
    }
    raw[k] = std::move(curve);
  });

  CoherenceCurve out;
  out.times_us = times;
  out.method = "mecce";
  out.order = opt.max_order;
  out.seed = bath.seed;
  out.values = assemble_cce_product(p.clusters, raw, n_t, opt.divisor_guard,
                                    &out.divisor_guard_hits, &out.clip_hits);
  if (cfg.gamma_nv_us > 0.0) {
    const double dm = m0 - m1;
    for (std::size_t ti = 0; ti < n_t; ++ti)
      out.values[ti] *= std::exp(-0.5 * cfg.gamma_nv_us * dm * dm * times[ti]);
  }
  return out;
}

CoherenceCurve megcce_coherence(const BathRealization& bath,
                                const CentralSpin& nv,
                                const ExternalField& field,
                                const PulseSequence& seq, const CceOptions& opt,
                                const ChannelConfig& cfg) {
  MePrepared p = me_prepare(bath, nv, field, opt, cfg);
  const std::vector<double> times = opt.grid.times();
  const std::size_t n_t = times.size();

  const MatrixXcd h_central = build_central(nv, field);
  const CentralSubspace sub =
      central_subspace(h_central, opt.level0_m, opt.level1_m);
  const VectorXcd psi0 = (sub.u0 + sub.u1) / std::sqrt(2.0);

  auto run_cluster = [&](const std::vector<int>& members) {
    std::vector<const MeSite*> sites;
    for (int idx : members) sites.push_back(&p.sys.sites[idx]);
    const ClusterSpec spec = cluster_spec_from_sites(p.sys, members);
    const std::vector<int> bdims = spec.dims();
    const int db = spec.dim();
    const MatrixXcd id_b = MatrixXcd::Identity(db, db);

    MatrixXcd h = kron<cxd>(h_central, id_b);
    if (!members.empty()) {
      h += build_interaction(spec);
      h += kron<cxd>(MatrixXcd::Identity(3, 3), build_bath(spec));
    }

    std::vector<std::pair<MatrixXcd, double>> jumps;
    for (const auto& [ch, local] : cluster_channels(p.sys, members)) {
      const MatrixXcd l = channel_operator(ch, sites, local, bdims);
      jumps.push_back({kron<cxd>(MatrixXcd::Identity(3, 3), l), ch.rate_us});
    }
    if (cfg.gamma_nv_us > 0.0) {
      const auto s1 = spin_operators(1.0);
      jumps.push_back(
          {kron<cxd>(s1.sz, id_b), cfg.gamma_nv_us});
    }

    std::vector<MatrixXcd> pulses;
    for (double ph : seq.phases_rad)
      pulses.push_back(kron<cxd>(sub.pulse(ph), id_b));

    const Eigen::VectorXd w = members.empty()
                                  ? Eigen::VectorXd::Ones(1)
                                  : site_populations(p.sys, members);
    MatrixXcd wb = MatrixXcd::Zero(db, db);
    wb.diagonal() = w.cast<cxd>();
    const MatrixXcd rho0 = kron<cxd>((psi0 * psi0.adjoint()).eval(), wb);
    const MatrixXcd proj_t =
        kron<cxd>((sub.u1 * sub.u0.adjoint()).eval(), id_b).transpose();
    const VectorXcd proj_vec =
        Eigen::Map<const VectorXcd>(proj_t.data(), proj_t.size());

    const std::vector<MatrixXcd> traj = lindblad_propagate(
        h, jumps, rho0, seq, pulses, times, 1e-6);
    std::vector<cxd> curve(n_t);
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      const VectorXcd v = Eigen::Map<const VectorXcd>(
          traj[ti].data(), traj[ti].size());
      curve[ti] = v.cwiseProduct(proj_vec).sum() / cxd(0.5, 0.0);
    }
    return curve;
  };

  // order-0 factor
  const std::vector<cxd> l0 = run_cluster({});

  std::vector<Vec3> site_pos;
  site_pos.reserve(p.sys.sites.size());
  for (const MeSite& s : p.sys.sites) site_pos.push_back(s.position);

  std::vector<std::vector<cxd>> raw(p.clusters.size());
  parallel_for(p.clusters.size(), opt.workers, [&](std::size_t k) {
    std::vector<cxd> curve =
        run_cluster(canonical_order(p.clusters[k].members, site_pos));
    for (std::size_t ti = 0; ti < n_t; ++ti)
      if (std::abs(l0[ti]) > 1e-12) curve[ti] /= l0[ti];
    raw[k] = std::move(curve);
  });

  CoherenceCurve out;
  out.times_us = times;
  out.method = "megcce";
  out.order = opt.max_order;
  out.seed = bath.seed;
  out.values = assemble_cce_product(p.clusters, raw, n_t, opt.divisor_guard,
                                    &out.divisor_guard_hits, &out.clip_hits);
  for (std::size_t ti = 0; ti < n_t; ++ti) out.values[ti] *= l0[ti];
  return out;
}

}  // namespace spinbath
