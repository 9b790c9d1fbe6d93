#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/master_equation.hpp"
#include "spinbath/rng.hpp"

#include <random>

using namespace spinbath;

namespace {

BathRealization random_electron_bath(int n, double box_nm, std::uint64_t seed) {
  BathRealization b;
  b.seed = seed;
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(-box_nm, box_nm);
  for (int i = 0; i < n; ++i) {
    BathSpin s;
    s.id = i;
    s.species = species_by_name("e");
    for (;;) {
      s.position = Vec3(u(rng), u(rng), u(rng));
      bool ok = (s.position.norm() > 1.5);
      for (const BathSpin& prev : b.spins)
        ok = ok && (prev.position - s.position).norm() > 0.8;
      if (ok) break;
    }
    b.spins.push_back(s);
  }
  return b;
}

}  // namespace

TEST_CASE("hop rate formula") {
  HoppingModel m;
  m.t_hop_us = 0.01;
  m.r_hop_nm = 5.0;
  CHECK(hop_rate(0.0, m) == doctest::Approx(100.0));
  CHECK(hop_rate(5.0, m) == doctest::Approx(100.0 * std::exp(-1.0)));
  CHECK(hop_rate(5.0, m) == doctest::Approx(36.788).epsilon(1e-4));
  m.two_pi_prefactor = true;
  CHECK(hop_rate(0.0, m) == doctest::Approx(100.0 / kTwoPi));
}

TEST_CASE("gibbs state") {
  const SpinSpecies& e = species_by_name("e");
  SUBCASE("infinite temperature is maximally mixed") {
    const MatrixXcd rho = gibbs_state(e, 1e9, 0.04);
    CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("zero field is maximally mixed") {
    const MatrixXcd rho = gibbs_state(e, 0.05, 0.0);
    CHECK(rho(0, 0).real() == doctest::Approx(0.5));
  }
  SUBCASE("polarization matches the two-level closed form") {
    // electron, 400 G, 20 mK:  p = tanh(hbar |gamma| B / (2 k T))
    const double t = 0.020;
    const MatrixXcd rho = gibbs_state(e, t, 0.04);
    const double x = PhysicalConstants::hbar * std::abs(e.gamma) * 0.04 /
                     (2.0 * PhysicalConstants::k_boltzmann * t);
    const double p_expect = std::tanh(x);
    const double p_got = std::abs(rho(0, 0).real() - rho(1, 1).real());
    CHECK(p_got == doctest::Approx(p_expect).epsilon(1e-10));
    CHECK(rho.trace().real() == doctest::Approx(1.0));
  }
}

TEST_CASE("relaxation channel construction") {
  const BathRealization bath = random_electron_bath(3, 5.0, 5);
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  const BathView view = make_view(nv, f, bath);
  CceOptions opt;

  SUBCASE("no T1 means no channels") {
    ChannelConfig cfg;
    const MeSystem sys = make_me_system(view, cfg, opt);
    CHECK(sys.channels.empty());
  }
  SUBCASE("T1 = 10 us gives gamma = 1/(20 pi) per spin, both directions") {
    ChannelConfig cfg;
    cfg.t1_us = 10.0;
    const MeSystem sys = make_me_system(view, cfg, opt);
    CHECK(sys.channels.size() == 6);
    for (const auto& ch : sys.channels) {
      CHECK(ch.rate_us == doctest::Approx(1.0 / (20.0 * kPi)));
      CHECK(ch.rate_us == doctest::Approx(0.0159).epsilon(2e-3));
    }
  }
}

TEST_CASE("amplitude damping against the analytic law") {
  // single spin, only S- channel: excited population decays as exp(-G t)
  const auto sh = oracle::spin_half();
  MatrixXcd h = MatrixXcd::Zero(2, 2);
  MatrixXcd sm = sh.sm;
  const double gamma = 0.37;
  MatrixXcd rho0 = MatrixXcd::Zero(2, 2);
  rho0(0, 0) = 1.0;  // excited (m = +1/2)

  const std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 5.0};
  const auto traj = lindblad_propagate(h, {{sm, gamma}}, rho0,
                                       PulseSequence::fid(), {}, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(traj[k](0, 0).real() ==
          doctest::Approx(std::exp(-gamma * times[k])).epsilon(1e-8));
    CHECK(traj[k].trace().real() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pair exchange equilibrates populations") {
  // two spins starting in |up,down>; incoherent exchange drives
  // <Sz_i - Sz_j> to zero at rate 2 Gamma (rate-equation solution)
  const auto sh = oracle::spin_half();
  const std::vector<int> dims = {2, 2};
  const MatrixXcd up = oracle::embed(sh.sp, 0, dims) *
                       oracle::embed(sh.sm, 1, dims);
  const MatrixXcd dn = oracle::embed(sh.sm, 0, dims) *
                       oracle::embed(sh.sp, 1, dims);
  const double g = 0.8;
  MatrixXcd rho0 = MatrixXcd::Zero(4, 4);
  rho0(1, 1) = 1.0;  // |up, down>
  const MatrixXcd h = MatrixXcd::Zero(4, 4);
  const std::vector<double> times = {0.0, 0.3, 1.0, 3.0};
  const auto traj = lindblad_propagate(h, {{up, g}, {dn, g}}, rho0,
                                       PulseSequence::fid(), {}, times);
  const MatrixXcd dz = oracle::embed(sh.sz, 0, dims) -
                       oracle::embed(sh.sz, 1, dims);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expect = std::exp(-2.0 * g * times[k]);
    const double got = (traj[k] * dz).trace().real();
    CHECK(got == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("negative rate and trace drift rejected") {
  const auto sh = oracle::spin_half();
  MatrixXcd h = MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(lindblad_propagate(h, {{sh.sm, -1.0}},
                                     MatrixXcd::Identity(2, 2) * 0.5,
                                     PulseSequence::fid(), {}, {1.0}),
                  ConfigError);
  MatrixXcd bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(lindblad_propagate(bad, {}, MatrixXcd::Identity(2, 2) * 0.5,
                                     PulseSequence::fid(), {}, {1.0}),
                  NumericError);
}

TEST_CASE("mecce with zero rates equals closed cce") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  const BathRealization bath = random_electron_bath(10, 8.0, 99);
  CceOptions opt;
  opt.max_order = 2;
  opt.grid.t_min_us = 0.5;
  opt.grid.t_max_us = 500.0;
  opt.grid.points_per_decade = 5;
  const auto seq = PulseSequence::hahn_echo();
  ChannelConfig cfg;  // all rates zero
  const auto closed = cce_coherence(bath, nv, f, seq, opt);
  const auto me = mecce_coherence(bath, nv, f, seq, opt, cfg);
  double max_dev = 0;
  for (std::size_t k = 0; k < closed.values.size(); ++k)
    max_dev = std::max(max_dev, std::abs(closed.values[k] - me.values[k]));
  CHECK(max_dev < 1e-8);
}

TEST_CASE("mecce against brute-force projected Liouville evolution") {
  // full-bath ME-CCE (order = bath size) vs direct RK4 on the projected
  // block with the same channels. A small field keeps the oracle's
  // fixed-step integrator accurate.
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 0.5);
  const BathRealization bath = random_electron_bath(3, 4.0, 123);
  CceOptions opt;
  opt.max_order = 3;
  opt.r_connect_electron_nm = 1e4;
  opt.grid.t_min_us = 1.0;
  opt.grid.t_max_us = 20.0;
  opt.grid.points_per_decade = 4;
  const auto seq = PulseSequence::hahn_echo();
  ChannelConfig cfg;
  cfg.t1_us = 8.0;
  const auto me = mecce_coherence(bath, nv, f, seq, opt, cfg);

  const BathView view = make_view(nv, f, bath);
  const ClusterSpec spec = make_cluster_spec(view, {0, 1, 2});
  const MatrixXcd h0 = conditioned_bath_hamiltonian(spec, 0.0);
  const MatrixXcd h1 = conditioned_bath_hamiltonian(spec, -1.0);
  const double g = 1.0 / (kTwoPi * cfg.t1_us);
  std::vector<std::pair<MatrixXcd, double>> jumps;
  const std::vector<int> dims = {2, 2, 2};
  const auto sh = oracle::spin_half();
  for (int i = 0; i < 3; ++i) {
    jumps.push_back({oracle::embed(sh.sp, i, dims), g});
    jumps.push_back({oracle::embed(sh.sm, i, dims), g});
  }
  auto deriv = [&](const MatrixXcd& r, const MatrixXcd& ha, const MatrixXcd& hb) {
    MatrixXcd d = cxd(0, -1) * (ha * r - r * hb);
    for (const auto& [l, rate] : jumps) {
      const MatrixXcd ldl = l.adjoint() * l;
      d += rate * (l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl));
    }
    return d;
  };
  auto rk4_half = [&](MatrixXcd r, const MatrixXcd& ha, const MatrixXcd& hb,
                      double t_half) {
    const int steps = std::max(2000, static_cast<int>(t_half / 2e-3));
    const double dt = t_half / steps;
    for (int s = 0; s < steps; ++s) {
      const MatrixXcd k1 = deriv(r, ha, hb);
      const MatrixXcd k2 = deriv(r + 0.5 * dt * k1, ha, hb);
      const MatrixXcd k3 = deriv(r + 0.5 * dt * k2, ha, hb);
      const MatrixXcd k4 = deriv(r + dt * k3, ha, hb);
      r += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
  };
  double max_dev = 0;
  for (std::size_t k = 0; k < me.times_us.size(); ++k) {
    const double t = me.times_us[k];
    cxd exact = 1.0;
    if (t > 0.0) {
      MatrixXcd r = MatrixXcd::Identity(8, 8) / 8.0;
      r = rk4_half(r, h0, h1, t / 2.0);
      r = rk4_half(r, h1, h0, t / 2.0);
      exact = r.trace();
    }
    max_dev = std::max(max_dev, std::abs(me.values[k] - exact));
  }
  CHECK(max_dev < 2e-6);  // limited by the oracle's fixed-step integrator
}

TEST_CASE("megcce reduces to gcce at zero rates") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  nv.e_transverse = mhz_to_rad_us(15.0);
  ExternalField f = field_along(nv.axis, 400.0);
  const BathRealization bath = random_electron_bath(2, 4.0, 31);
  CceOptions opt;
  opt.max_order = 2;
  opt.r_connect_electron_nm = 1e4;
  opt.grid.t_min_us = 0.5;
  opt.grid.t_max_us = 50.0;
  opt.grid.points_per_decade = 4;
  const auto seq = PulseSequence::hahn_echo();
  ChannelConfig cfg;
  const auto a = gcce_coherence(bath, nv, f, seq, opt);
  const auto b = megcce_coherence(bath, nv, f, seq, opt, cfg);
  double max_dev = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    max_dev = std::max(max_dev, std::abs(a.values[k] - b.values[k]));
  CHECK(max_dev < 1e-7);
}

TEST_CASE("hopping bath mapping") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  BathRealization bath;
  BathSpin s;
  s.id = 0;
  s.species = species_by_name("e");
  s.position = Vec3(3, 0, 1);
  bath.spins = {s};
  bath.holes = {Vec3(5, 1, 1)};
  const BathView view = make_view(nv, f, bath);
  CceOptions opt;
  ChannelConfig cfg;
  cfg.hopping = true;
  cfg.hop.t_hop_us = 0.01;
  cfg.hop.r_hop_nm = 5.0;
  const MeSystem sys = make_me_system(view, cfg, opt);

  SUBCASE("one spin plus one hole gives four hop channels") {
    CHECK(sys.sites.size() == 2);
    CHECK(sys.channels.size() == 4);
    for (const auto& ch : sys.channels) CHECK(ch.kind == ChannelKind::hop);
    const double r = (bath.spins[0].position - bath.holes[0]).norm();
    for (const auto& ch : sys.channels)
      CHECK(ch.rate_us == doctest::Approx(hop_rate(r, cfg.hop)));
  }

  SUBCASE("hole sites annihilate spin operators") {
    const SiteOps ops = site_ops_three_level();
    VectorXcd hole = VectorXcd::Zero(3);
    hole(2) = 1.0;
    CHECK((ops.sx * hole).norm() == 0.0);
    CHECK((ops.sy * hole).norm() == 0.0);
    CHECK((ops.sz * hole).norm() == 0.0);
  }

  SUBCASE("initial states") {
    CHECK(sys.sites[0].init_pops(0) == doctest::Approx(0.5));
    CHECK(sys.sites[0].init_pops(2) == 0.0);
    CHECK(sys.sites[1].init_pops(2) == doctest::Approx(1.0));
  }

  SUBCASE("no holes means no hop channels act") {
    BathRealization no_holes = bath;
    no_holes.holes.clear();
    const BathView v2 = make_view(nv, f, no_holes);
    const MeSystem s2 = make_me_system(v2, cfg, opt);
    CHECK(s2.channels.empty());
  }
}

TEST_CASE("hop conserves site occupancy and moves population") {
  // two sites: spin at A, hole at B; propagate the full Lindblad and check
  // total occupancy per site stays one and spin population transfers
  const SiteOps ops = site_ops_three_level();
  const std::vector<int> dims = {3, 3};
  // hop operator |0_A s_B><s_A 0_B| for s = up
  MatrixXcd k_minus_up = MatrixXcd::Zero(3, 3);
  k_minus_up(2, 0) = 1.0;
  MatrixXcd k_plus_up = MatrixXcd::Zero(3, 3);
  k_plus_up(0, 2) = 1.0;
  MatrixXcd k_minus_dn = MatrixXcd::Zero(3, 3);
  k_minus_dn(2, 1) = 1.0;
  MatrixXcd k_plus_dn = MatrixXcd::Zero(3, 3);
  k_plus_dn(1, 2) = 1.0;
  const MatrixXcd hop_ab_up = spinbath::embed2<cxd>(k_minus_up, 0, k_plus_up, 1, dims);
  const MatrixXcd hop_ab_dn = spinbath::embed2<cxd>(k_minus_dn, 0, k_plus_dn, 1, dims);
  const MatrixXcd hop_ba_up = spinbath::embed2<cxd>(k_plus_up, 0, k_minus_up, 1, dims);
  const MatrixXcd hop_ba_dn = spinbath::embed2<cxd>(k_plus_dn, 0, k_minus_dn, 1, dims);
  const double g = 2.0;

  MatrixXcd rho0 = MatrixXcd::Zero(9, 9);
  // spin up at A (index 0), hole at B (index 2): product state index 0*3+2
  rho0(2, 2) = 1.0;
  const MatrixXcd h = MatrixXcd::Zero(9, 9);
  const std::vector<double> times = {0.0, 0.1, 0.5, 2.0};
  const auto traj = lindblad_propagate(
      h, {{hop_ab_up, g}, {hop_ab_dn, g}, {hop_ba_up, g}, {hop_ba_dn, g}},
      rho0, PulseSequence::fid(), {}, times);

  const MatrixXcd occ_a =
      spinbath::embed<cxd>((MatrixXcd(3, 3) << 1, 0, 0, 0, 1, 0, 0, 0, 0)
                               .finished(),
                           0, dims);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(traj[k].trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    // symmetric two-site hop equilibrates occupancy toward 1/2
    const double pa = (traj[k] * occ_a).trace().real();
    const double expect = 0.5 * (1.0 + std::exp(-2.0 * g * times[k]));
    CHECK(pa == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("mecce hopping: no acceptors reduces to the static bath") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  const BathRealization bath = random_electron_bath(4, 6.0, 404);
  CceOptions opt;
  opt.max_order = 2;
  opt.r_connect_electron_nm = 1e4;
  opt.r_connect_hop_nm = 1e4;
  opt.grid.t_min_us = 0.5;
  opt.grid.t_max_us = 200.0;
  opt.grid.points_per_decade = 4;
  const auto seq = PulseSequence::hahn_echo();
  ChannelConfig off;
  ChannelConfig hop_on;
  hop_on.hopping = true;
  const auto plain = mecce_coherence(bath, nv, f, seq, opt, off);
  const auto hop = mecce_coherence(bath, nv, f, seq, opt, hop_on);
  double max_dev = 0;
  for (std::size_t k = 0; k < plain.values.size(); ++k)
    max_dev = std::max(max_dev, std::abs(plain.values[k] - hop.values[k]));
  CHECK(max_dev < 1e-9);
}

TEST_CASE("coherence deviation grows linearly in small rates") {
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  const BathRealization bath = random_electron_bath(4, 6.0, 2024);
  CceOptions opt;
  opt.max_order = 2;
  opt.grid.t_min_us = 1.0;
  opt.grid.t_max_us = 100.0;
  opt.grid.points_per_decade = 4;
  const auto seq = PulseSequence::hahn_echo();
  const auto closed = cce_coherence(bath, nv, f, seq, opt);

  auto deviation = [&](double t1_us) {
    ChannelConfig cfg;
    cfg.t1_us = t1_us;
    const auto me = mecce_coherence(bath, nv, f, seq, opt, cfg);
    double dev = 0;
    for (std::size_t k = 0; k < closed.values.size(); ++k)
      dev = std::max(dev, std::abs(me.values[k] - closed.values[k]));
    return dev;
  };
  // rates scale as 1/T1; halving the rate should halve the deviation
  const double d1 = deviation(4.0e4);
  const double d2 = deviation(2.0e4);
  CHECK(d2 > 0.0);
  CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("single-spin T2 is non-monotonic in T1") {
  // toy model: one surface electron near the central spin; sweep T1 and
  // find an interior minimum of the 1/e decay time
  CentralSpin nv = make_nv(Vec3(0, 0, -3), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  BathRealization bath;
  BathSpin s;
  s.id = 0;
  s.species = species_by_name("e");
  s.position = Vec3(2.0, 0, 0);
  bath.spins = {s};

  CceOptions opt;
  opt.max_order = 1;
  opt.grid.t_min_us = 0.05;
  opt.grid.t_max_us = 5e4;
  opt.grid.points_per_decade = 8;
  const auto seq = PulseSequence::hahn_echo();

  std::vector<double> t1_grid = {0.2, 2.0, 20.0, 200.0, 2000.0};
  std::vector<double> one_over_e;
  for (double t1 : t1_grid) {
    ChannelConfig cfg;
    cfg.t1_us = t1;
    const auto me = mecce_coherence(bath, nv, f, seq, opt, cfg);
    one_over_e.push_back(
        one_over_e_crossing(me.times_us, me.magnitudes()));
  }
  std::size_t argmin = 0;
  for (std::size_t k = 1; k < one_over_e.size(); ++k)
    if (one_over_e[k] < one_over_e[argmin]) argmin = k;
  CHECK(argmin > 0);
  CHECK(argmin + 1 < one_over_e.size());
}
