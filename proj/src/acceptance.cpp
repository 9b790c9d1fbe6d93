#include "spinbath/acceptance.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/threading.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinbath {

namespace {

std::string fmt1(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct MeanRun {
  CoherenceCurve mean;
  EnsembleStats stats;
  FitResult mean_fit;
  bool mean_fit_ok = false;
};

// Fits for the electron-bath criteria are windowed to the observable part
// of the decay; the deep sub-1e-2 tail carries no experimental weight but
// strong leverage in log-log space.
FitOptions electron_fit_options() {
  FitOptions fo;
  fo.floor = 0.02;
  return fo;
}

MeanRun run_mean(const ExperimentConfig& cfg, const SweepCell& cell,
                 const AcceptanceOptions& opt, const FitOptions& fit = {}) {
  EnsembleOptions eopt;
  eopt.n_configs = cfg.n_configs;
  eopt.seed = task_seed(cfg.seed, cell.id());
  eopt.workers = opt.workers;
  eopt.fit = fit;
  MeanRun out;
  EnsembleResult r = ensemble_coherence(
      [&](std::uint64_t member_seed, int) {
        return run_cell_member(cfg, cell, member_seed, 1);
      },
      eopt);
  out.mean = std::move(r.mean);
  out.stats = std::move(r.stats);
  try {
    out.mean_fit = fit_stretched(out.mean, fit);
    out.mean_fit_ok = true;
  } catch (const NumericError&) {
    out.mean_fit_ok = false;
  }
  return out;
}

ExperimentConfig bulk_config(std::uint64_t seed, int n_configs,
                             double radius_nm = 6.0) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::bulk;
  cfg.method = Method::cce;
  cfg.order = 2;
  cfg.seed = seed;
  cfg.n_configs = n_configs;
  cfg.geometry.c13_radius_nm = radius_nm;
  cfg.grid.t_min_us = 10.0;
  cfg.grid.t_max_us = 1e4;
  cfg.grid.points_per_decade = 12;
  cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
  return cfg;
}

// Surface-slab variant of the bulk run: central spin below a bare surface.
ExperimentConfig bare_surface_config(std::uint64_t seed, int n_configs,
                                     double depth_nm) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::nuclear_surface;
  cfg.method = Method::cce;
  cfg.order = 2;
  cfg.seed = seed;
  cfg.n_configs = n_configs;
  cfg.geometry.orientation = Orientation::o100;
  cfg.geometry.termination = Termination::bare;
  cfg.geometry.depth_nm = {depth_nm};
  cfg.geometry.include_c13 = true;
  cfg.geometry.c13_radius_nm = 6.0;
  cfg.grid.t_min_us = 10.0;
  cfg.grid.t_max_us = 1e4;
  cfg.grid.points_per_decade = 12;
  cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
  return cfg;
}

ExperimentConfig electron_config(std::uint64_t seed, int n_configs, double rho,
                                 Orientation orientation,
                                 const std::vector<double>& depths) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::static_electrons;
  cfg.method = Method::cce;
  cfg.order = 2;
  cfg.seed = seed;
  cfg.n_configs = n_configs;
  cfg.geometry.orientation = orientation;
  cfg.geometry.depth_nm = depths;
  cfg.geometry.electron_density_nm2 = {rho};
  cfg.cce.r_connect_electron_nm = std::max(8.0, 2.5 / std::sqrt(rho));
  cfg.grid.t_min_us = 0.01;
  cfg.grid.t_max_us = 1e4;
  cfg.grid.points_per_decade = 12;
  return cfg;
}

// ---- criterion implementations -------------------------------------------

CriterionResult c1_bulk_t2(const AcceptanceOptions& opt) {
  CriterionResult r{1, "bulk 13C Hahn-echo T2", false, ""};
  ExperimentConfig cfg = bulk_config(task_seed(opt.seed, "c1"), 50);
  const MeanRun run = run_mean(cfg, SweepCell{}, opt);
  const double t2 = run.stats.mean_t2;
  r.pass = (t2 >= 850.0 * 0.8 && t2 <= 850.0 * 1.2);
  r.detail = "mean T2 = " + fmt1(t2) + " us (target 850 +- 20%, n = " +
             fmt1(run.stats.mean_n) + ", " +
             std::to_string(run.stats.n_configs) + " configs)";
  return r;
}

// Paired comparison of a bulk realization and its surface-truncated
// version: the same lattice draw is fitted with and without the spins
// above the surface plane. Returns (mean ratio, standard error).
std::pair<double, double> paired_truncation_t2(double depth_nm, int n_configs,
                                               const AcceptanceOptions& opt) {
  std::vector<double> ratios(n_configs, 0.0);
  parallel_for(n_configs, opt.workers, [&](std::size_t k) {
    BulkRegion reg;
    reg.center = Vec3(0, 0, -depth_nm);
    reg.radius_nm = 6.0;
    const BathRealization full = sample_bulk_c13(
        reg, 0.011, task_seed(opt.seed, "c23pair" + std::to_string(k)));
    BathRealization truncated = full;
    truncated.spins.clear();
    for (const BathSpin& sp : full.spins)
      if (sp.position.z() < 0.0) {
        BathSpin c = sp;
        c.id = static_cast<int>(truncated.spins.size());
        truncated.spins.push_back(c);
      }
    const CentralSpin nv = make_nv(reg.center, Vec3(1, 1, 1).normalized());
    const ExternalField f = field_along(nv.axis, 400.0);
    CceOptions copt;
    copt.max_order = 2;
    copt.workers = 1;
    copt.grid.t_min_us = 10.0;
    copt.grid.t_max_us = 1e4;
    copt.grid.points_per_decade = 12;
    copt.grid.lock_period_us =
        revival_period_us(species_by_name("13C"), 400.0);
    const auto seq = PulseSequence::hahn_echo();
    const auto curve_full = cce_coherence(full, nv, f, seq, copt);
    const auto curve_trunc = cce_coherence(truncated, nv, f, seq, copt);
    ratios[k] = fit_stretched(curve_trunc).t2_us /
                fit_stretched(curve_full).t2_us;
  });
  double mean = 0;
  for (double v : ratios) mean += v;
  mean /= n_configs;
  double var = 0;
  for (double v : ratios) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (n_configs - 1) / n_configs);
  return {mean, se};
}

CriterionResult c2_near_surface_ratio(const AcceptanceOptions& opt) {
  CriterionResult r{2, "near-surface spin count and T2 ratio", false, ""};
  // count ratio on a large truncated sphere, 1 nm below the surface
  BulkRegion bulk;
  bulk.center = Vec3(0, 0, -1.0);
  bulk.radius_nm = 20.0;
  BulkRegion slab = bulk;
  slab.truncate_at_surface = true;
  const double count_ratio =
      static_cast<double>(count_lattice_sites(slab)) /
      static_cast<double>(count_lattice_sites(bulk));
  const bool count_ok = count_ratio >= 0.45 && count_ratio <= 0.55;

  // T2 ratio, paired: each realization is fitted in full and with the
  // spins above the surface plane removed
  const auto pair = paired_truncation_t2(1.0, 20, opt);
  const double t2_ratio = pair.first;
  const bool t2_ok = t2_ratio >= 1.6 && t2_ratio <= 2.4;

  r.pass = count_ok && t2_ok;
  r.detail = "count ratio = " + fmt1(count_ratio) +
             " (target 0.5 +- 0.05), paired T2 ratio = " + fmt1(t2_ratio) +
             " +- " + fmt1(pair.second) + " (target 2 +- 0.4)";
  return r;
}

CriterionResult c3_bare_convergence(const AcceptanceOptions& opt) {
  CriterionResult r{3, "bare-surface convergence at 4 nm", false, ""};
  const auto pair = paired_truncation_t2(4.0, 20, opt);
  r.pass = std::abs(pair.first - 1.0) <= 0.10;
  r.detail = "paired T2(4 nm)/T2(bulk) = " + fmt1(pair.first) + " +- " +
             fmt1(pair.second) + " (target within 10%)";
  return r;
}

CriterionResult c4_fluorine_ordering(const AcceptanceOptions& opt) {
  CriterionResult r{4, "fluorine facet ordering at 4 nm", false, ""};
  const Orientation facets[4] = {Orientation::o111, Orientation::o110,
                                 Orientation::o113, Orientation::o100};
  const double published[4] = {157.0, 202.0, 211.0, 293.0};
  double t2[4] = {0, 0, 0, 0};
  for (int k = 0; k < 4; ++k) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::nuclear_surface;
    cfg.method = Method::cce;
    cfg.order = 2;
    cfg.seed = task_seed(opt.seed, "c4" + to_string(facets[k]));
    cfg.n_configs = 4;
    cfg.geometry.orientation = facets[k];
    cfg.geometry.termination = Termination::fluorine;
    cfg.geometry.depth_nm = {4.0};
    cfg.geometry.include_c13 = true;
    cfg.geometry.c13_radius_nm = 6.0;
    cfg.geometry.surface_lateral_radius_nm = 12.0;
    cfg.grid.t_min_us = 4.0;
    cfg.grid.t_max_us = 3e3;
    cfg.grid.points_per_decade = 16;
    cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
    SweepCell cell;
    cell.depth_nm = 4.0;
    const MeanRun run = run_mean(cfg, cell, opt);
    t2[k] = run.mean_fit_ok ? run.mean_fit.t2_us : 0.0;
  }
  const bool ordering =
      t2[0] < t2[1] && t2[1] <= 1.05 * t2[2] && t2[2] < t2[3];
  int in_band = 0;
  for (int k = 0; k < 4; ++k)
    if (t2[k] >= 0.75 * published[k] && t2[k] <= 1.25 * published[k])
      ++in_band;
  r.pass = ordering;
  r.detail = "T2 = {111: " + fmt1(t2[0]) + ", 110: " + fmt1(t2[1]) +
             ", 113: " + fmt1(t2[2]) + ", 100: " + fmt1(t2[3]) +
             "} us; ordering " + (ordering ? "holds" : "violated") + ", " +
             std::to_string(in_band) + "/4 within the soft +-25% bands";
  return r;
}

CriterionResult c5_stretch_crossover(const AcceptanceOptions& opt) {
  CriterionResult r{5, "stretch-exponent crossover at rho = 0.05", false, ""};
  // the deep point sits at 3x the inter-spin distance (13.4 nm): well into
  // the quasi-static regime but before the re-entrant narrowing that sets
  // in when the bath correlation time overtakes the slower deep decay
  const double deep_nm = 3.0 / std::sqrt(0.05);
  ExperimentConfig cfg = electron_config(task_seed(opt.seed, "c5"), 200, 0.05,
                                         Orientation::o100, {1.0, deep_nm});
  cfg.grid.points_per_decade = 16;
  SweepCell shallow;
  shallow.depth_nm = 1.0;
  shallow.density_nm2 = 0.05;
  SweepCell deep = shallow;
  deep.depth_nm = deep_nm;
  const MeanRun a = run_mean(cfg, shallow, opt, electron_fit_options());
  const MeanRun b = run_mean(cfg, deep, opt, electron_fit_options());
  const double n_shallow = a.mean_fit_ok ? a.mean_fit.n : 0.0;
  const double n_deep = b.mean_fit_ok ? b.mean_fit.n : 0.0;
  r.pass = n_shallow <= 1.6 && n_deep >= 2.6;
  r.detail = "n(1 nm) = " + fmt1(n_shallow) + " (<= 1.6), n(3/sqrt(rho) = " +
             fmt1(deep_nm) + " nm) = " + fmt1(n_deep) + " (>= 2.6)";
  return r;
}

CriterionResult c6_t2_depth_trend(const AcceptanceOptions& opt) {
  CriterionResult r{6, "static-electron T2 depth trend at rho = 0.05", false,
                    ""};
  ExperimentConfig cfg = electron_config(task_seed(opt.seed, "c6"), 200, 0.05,
                                         Orientation::o100, {1.0, 10.0});
  SweepCell shallow;
  shallow.depth_nm = 1.0;
  shallow.density_nm2 = 0.05;
  SweepCell deep = shallow;
  deep.depth_nm = 10.0;
  const MeanRun a = run_mean(cfg, shallow, opt, electron_fit_options());
  const MeanRun b = run_mean(cfg, deep, opt, electron_fit_options());
  const double t2_1 = a.mean_fit_ok ? a.mean_fit.t2_us : 0.0;
  const double t2_10 = b.mean_fit_ok ? b.mean_fit.t2_us : 0.0;
  r.pass = (t2_1 >= 0.5 && t2_1 <= 2.0) && (t2_10 >= 10.0 && t2_10 <= 40.0);
  r.detail = "T2(1 nm) = " + fmt1(t2_1) + " us (0.5..2), T2(10 nm) = " +
             fmt1(t2_10) + " us (10..40)";
  return r;
}

CriterionResult c7_sweet_spot(const AcceptanceOptions& opt) {
  CriterionResult r{7, "(111) pseudo-spin sign change and sweet spot", false,
                    ""};
  const double rho = 0.01;
  const double d_ij = 1.0 / std::sqrt(rho);  // 10 nm

  // sign-change depth of the dominant pair, median over seeds
  std::vector<double> crossings;
  for (int s = 0; s < 20; ++s) {
    SurfaceConfig surf;
    surf.orientation = Orientation::o111;
    surf.electron_density_nm2 = rho;
    std::vector<double> depths;
    for (double d = 0.25; d <= 8.0; d += 0.25) depths.push_back(d);
    const auto rows = pseudospin_depth_scan(
        surf, depths, task_seed(opt.seed, "c7scan" + std::to_string(s)), 200);
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (rows[k].omega_signed * rows[k - 1].omega_signed < 0.0) {
        crossings.push_back(0.5 * (rows[k].depth_nm + rows[k - 1].depth_nm));
        break;
      }
  }
  double median_crossing = 0.0;
  if (!crossings.empty()) {
    std::sort(crossings.begin(), crossings.end());
    median_crossing = crossings[crossings.size() / 2];
  }
  const bool sign_ok = !crossings.empty() &&
                       median_crossing >= 0.7 * d_ij / 4.0 &&
                       median_crossing <= 1.3 * d_ij / 4.0;

  // T2 comparison at the sweet-spot depth d_ij / 2
  ExperimentConfig cfg111 = electron_config(task_seed(opt.seed, "c7a"), 60,
                                            rho, Orientation::o111,
                                            {d_ij / 2.0});
  ExperimentConfig cfg100 = electron_config(task_seed(opt.seed, "c7b"), 60,
                                            rho, Orientation::o100,
                                            {d_ij / 2.0});
  SweepCell cell;
  cell.depth_nm = d_ij / 2.0;
  cell.density_nm2 = rho;
  const MeanRun a = run_mean(cfg111, cell, opt, electron_fit_options());
  const MeanRun b = run_mean(cfg100, cell, opt, electron_fit_options());
  const double ratio = a.stats.mean_t2 / b.stats.mean_t2;
  const bool ratio_ok = ratio >= 1.2;

  r.pass = sign_ok && ratio_ok;
  r.detail = "median omega sign change at " + fmt1(median_crossing) +
             " nm (target " + fmt1(d_ij / 4.0) +
             " +- 30%), T2(111)/T2(100) at " + fmt1(d_ij / 2.0) +
             " nm = " + fmt1(ratio) + " (>= 1.2)";
  return r;
}

CriterionResult c8_me_limits(const AcceptanceOptions& opt) {
  CriterionResult r{8, "master-equation limits", false, ""};
  // (a) all rates zero: ME-CCE equals closed CCE on a 10-spin bath
  BathRealization bath;
  Rng rng = make_rng(task_seed(opt.seed, "c8bath"));
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 10; ++i) {
    BathSpin s;
    s.id = i;
    s.species = species_by_name("e");
    for (;;) {
      s.position = Vec3(u(rng), u(rng), u(rng));
      bool ok = s.position.norm() > 1.5;
      for (const BathSpin& prev : bath.spins)
        ok = ok && (prev.position - s.position).norm() > 0.8;
      if (ok) break;
    }
    bath.spins.push_back(s);
  }
  CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
  ExternalField f = field_along(nv.axis, 400.0);
  CceOptions copt;
  copt.max_order = 2;
  copt.workers = opt.workers;
  copt.grid.t_min_us = 0.5;
  copt.grid.t_max_us = 500.0;
  copt.grid.points_per_decade = 8;
  const auto closed =
      cce_coherence(bath, nv, f, PulseSequence::hahn_echo(), copt);
  ChannelConfig zero;
  const auto me =
      mecce_coherence(bath, nv, f, PulseSequence::hahn_echo(), copt, zero);
  double max_dev = 0;
  for (std::size_t k = 0; k < closed.values.size(); ++k)
    max_dev = std::max(max_dev, std::abs(closed.values[k] - me.values[k]));
  const bool limit_ok = max_dev <= 1e-8;

  // (b) T1 = 1 us at 5 nm: surface contribution vanishes
  ExperimentConfig cfg;
  cfg.scenario = Scenario::relaxing_electrons;
  cfg.method = Method::mecce;
  cfg.order = 2;
  cfg.seed = task_seed(opt.seed, "c8b");
  cfg.n_configs = 12;
  cfg.geometry.depth_nm = {5.0};
  cfg.geometry.electron_density_nm2 = {0.001};
  cfg.geometry.include_c13 = true;
  cfg.channels.t1_us = {1.0};
  cfg.cce.r_connect_electron_nm = std::max(8.0, 2.5 / std::sqrt(0.001));
  cfg.grid.t_min_us = 10.0;
  cfg.grid.t_max_us = 1e4;
  cfg.grid.points_per_decade = 12;
  cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
  SweepCell cell;
  cell.depth_nm = 5.0;
  cell.density_nm2 = 0.001;
  cell.t1_us = 1.0;
  const MeanRun with_e = run_mean(cfg, cell, opt);

  ExperimentConfig cfg0 = bare_surface_config(task_seed(opt.seed, "c8c"), 12, 5.0);
  SweepCell cell0;
  cell0.depth_nm = 5.0;
  const MeanRun baseline = run_mean(cfg0, cell0, opt);
  const double ratio = with_e.stats.mean_t2 / baseline.stats.mean_t2;
  const bool narrowing_ok = std::abs(ratio - 1.0) <= 0.10;

  r.pass = limit_ok && narrowing_ok;
  r.detail = "closed-limit max|dL| = " + fmt1(max_dev) +
             " (<= 1e-8), T2(T1=1us)/T2(13C only) = " + fmt1(ratio) +
             " (" + fmt1(with_e.stats.mean_t2) + " / " +
             fmt1(baseline.stats.mean_t2) + " us, target within 10%)";
  return r;
}

CriterionResult c9_relaxation_minimum(const AcceptanceOptions& opt) {
  CriterionResult r{9, "T2(T1) interior minimum near 50 us", false, ""};
  const std::vector<double> t1_grid = {1.0, 5.0, 20.0, 50.0, 200.0, 1000.0};
  std::vector<double> t2(t1_grid.size(), 0.0);
  for (std::size_t k = 0; k < t1_grid.size(); ++k) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::relaxing_electrons;
    cfg.method = Method::mecce;
    cfg.order = 2;
    cfg.seed = task_seed(opt.seed, "c9");
    cfg.n_configs = 12;
    cfg.geometry.depth_nm = {5.0};
    cfg.geometry.electron_density_nm2 = {0.001};
    cfg.geometry.include_c13 = true;
    cfg.channels.t1_us = {t1_grid[k]};
    cfg.cce.r_connect_electron_nm = std::max(8.0, 2.5 / std::sqrt(0.001));
    cfg.grid.t_min_us = 5.0;
    cfg.grid.t_max_us = 1e4;
    cfg.grid.points_per_decade = 12;
    cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
    SweepCell cell;
    cell.depth_nm = 5.0;
    cell.density_nm2 = 0.001;
    cell.t1_us = t1_grid[k];
    const MeanRun run = run_mean(cfg, cell, opt, electron_fit_options());
    t2[k] = run.stats.mean_t2;
  }
  std::size_t argmin = 0;
  for (std::size_t k = 1; k < t2.size(); ++k)
    if (t2[k] < t2[argmin]) argmin = k;
  const bool interior = argmin > 0 && argmin + 1 < t2.size();
  // within one grid step of 50 us: indices of 20, 50, 200
  const bool near_50 = interior && (argmin >= 2 && argmin <= 4);
  r.pass = interior && near_50;
  std::ostringstream os;
  os << "T2(T1) = {";
  for (std::size_t k = 0; k < t2.size(); ++k)
    os << (k ? ", " : "") << t1_grid[k] << ": " << fmt1(t2[k]);
  os << "} us, minimum at T1 = " << t1_grid[argmin];
  r.detail = os.str();
  return r;
}

ExperimentConfig hopping_config(std::uint64_t seed, int n_configs,
                                const std::vector<double>& depths,
                                const std::string& seq) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::hopping_electrons;
  cfg.method = Method::mecce;
  cfg.order = 2;
  cfg.sequence = PulseSequence::from_string(seq);
  cfg.seed = seed;
  cfg.n_configs = n_configs;
  cfg.geometry.depth_nm = depths;
  cfg.geometry.electron_density_nm2 = {0.008};  // sites; spins at 0.004
  cfg.geometry.hole_fraction = {0.5};
  cfg.geometry.include_c13 = true;
  cfg.channels.hopping = true;
  cfg.channels.hop.t_hop_us = 0.01;
  cfg.channels.hop.r_hop_nm = 5.0;
  cfg.grid.t_min_us = 0.05;
  cfg.grid.t_max_us = 1e4;
  cfg.grid.points_per_decade = 10;
  return cfg;
}

CriterionResult c10_hopping(const AcceptanceOptions& opt) {
  CriterionResult r{10, "hopping stretch exponent and XY4 ratio", false, ""};
  const std::vector<double> depths = {2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> n_he(depths.size()), t2_he(depths.size()),
      t2_xy4(depths.size());
  for (std::size_t k = 0; k < depths.size(); ++k) {
    SweepCell cell;
    cell.depth_nm = depths[k];
    cell.density_nm2 = 0.008;
    cell.hole_fraction = 0.5;
    ExperimentConfig he =
        hopping_config(task_seed(opt.seed, "c10h"), 8, depths, "hahn");
    const MeanRun a = run_mean(he, cell, opt, electron_fit_options());
    n_he[k] = a.mean_fit_ok ? a.mean_fit.n : 0.0;
    t2_he[k] = a.mean_fit_ok ? a.mean_fit.t2_us : 0.0;
    ExperimentConfig xy =
        hopping_config(task_seed(opt.seed, "c10x"), 8, depths, "xy4");
    const MeanRun b = run_mean(xy, cell, opt, electron_fit_options());
    t2_xy4[k] = b.mean_fit_ok ? b.mean_fit.t2_us : 0.0;
  }
  const bool n_start_ok = n_he.front() >= 0.52 && n_he.front() <= 0.82;
  bool n_monotone = true;
  for (std::size_t k = 1; k < n_he.size(); ++k)
    n_monotone = n_monotone && (n_he[k] >= n_he[k - 1] * 0.97);
  const double lambda_shallow = t2_xy4.front() / t2_he.front();
  const double lambda_deep = t2_xy4.back() / t2_he.back();
  const bool lambda_ok =
      lambda_shallow <= 1.5 && lambda_deep >= 2.0 && lambda_deep <= 3.0;
  r.pass = n_start_ok && n_monotone && lambda_ok;
  std::ostringstream os;
  os << "n(d) = {";
  for (std::size_t k = 0; k < depths.size(); ++k)
    os << (k ? ", " : "") << depths[k] << ": " << fmt1(n_he[k]);
  os << "}, lambda(shallow) = " << fmt1(lambda_shallow)
     << " (<= 1.5), lambda(deep) = " << fmt1(lambda_deep) << " (2.5 +- 0.5)";
  r.detail = os.str();
  return r;
}

CriterionResult c11_hole_fraction(const AcceptanceOptions& opt) {
  CriterionResult r{11, "T2 non-increasing in hole fraction", false, ""};
  const std::vector<double> fractions = {0.0, 0.4, 0.8};
  std::vector<double> t2(fractions.size(), 0.0);
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::hopping_electrons;
    cfg.method = Method::mecce;
    cfg.order = 2;
    cfg.seed = task_seed(opt.seed, "c11");
    cfg.n_configs = 12;
    cfg.geometry.depth_nm = {5.0};
    cfg.geometry.electron_density_nm2 = {0.01};
    cfg.geometry.hole_fraction = {fractions[k]};
    cfg.channels.hopping = true;
    cfg.grid.t_min_us = 0.05;
    cfg.grid.t_max_us = 1e4;
    cfg.grid.points_per_decade = 10;
    SweepCell cell;
    cell.depth_nm = 5.0;
    cell.density_nm2 = 0.01;
    cell.hole_fraction = fractions[k];
    const MeanRun run = run_mean(cfg, cell, opt, electron_fit_options());
    t2[k] = run.stats.mean_t2;
  }
  const bool monotone = t2[0] >= 0.97 * t2[1] && t2[1] >= 0.97 * t2[2];
  r.pass = monotone;
  r.detail = "T2(p_h) = {0: " + fmt1(t2[0]) + ", 0.4: " + fmt1(t2[1]) +
             ", 0.8: " + fmt1(t2[2]) + "} us (non-increasing)";
  return r;
}

CriterionResult c12_temperature_quench(const AcceptanceOptions& opt) {
  CriterionResult r{12, "50 mK Gibbs quench of surface-electron noise", false,
                    ""};
  const std::vector<double> depths = {1.0, 2.0, 4.0};
  std::ostringstream os;
  bool all_ok = true;
  for (double d : depths) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::temperature_scan;
    cfg.method = Method::cce;
    cfg.order = 2;
    cfg.seed = task_seed(opt.seed, "c12");
    cfg.n_configs = 12;
    cfg.geometry.depth_nm = {d};
    cfg.geometry.electron_density_nm2 = {0.001};
    cfg.geometry.include_c13 = true;
    cfg.temperature_mk = {50.0};
    cfg.cce.r_connect_electron_nm = std::max(8.0, 2.5 / std::sqrt(0.001));
    cfg.grid.t_min_us = 10.0;
    cfg.grid.t_max_us = 1e4;
    cfg.grid.points_per_decade = 12;
    cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
    SweepCell cell;
    cell.depth_nm = d;
    cell.density_nm2 = 0.001;
    cell.temperature_mk = 50.0;
    const MeanRun quenched = run_mean(cfg, cell, opt);

    ExperimentConfig base = bare_surface_config(
        task_seed(opt.seed, "c12b" + fmt1(d)), 12, d);
    SweepCell cell0;
    cell0.depth_nm = d;
    const MeanRun baseline = run_mean(base, cell0, opt);
    const double ratio = quenched.stats.mean_t2 / baseline.stats.mean_t2;
    const bool ok = std::abs(ratio - 1.0) <= 0.15;
    all_ok = all_ok && ok;
    os << "d=" << d << ": ratio " << fmt1(ratio) << (ok ? " ok" : " FAIL")
       << "; ";
  }
  r.pass = all_ok;
  r.detail = os.str() + "(target within 15% of the 13C-only value)";
  return r;
}

// Independent Liouvillian assembly for the oracle side of criterion 13.
MatrixXcd oracle_liouvillian(const MatrixXcd& hl, const MatrixXcd& hr,
                             const std::vector<std::pair<MatrixXcd, double>>& js) {
  const Eigen::Index d = hl.rows();
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  MatrixXcd g = cxd(0, -1) * (kron<cxd>(id, hl) -
                              kron<cxd>(hr.transpose(), id));
  for (const auto& [l, rate] : js) {
    const MatrixXcd ldl = l.adjoint() * l;
    g += rate * (kron<cxd>(l.conjugate(), l) -
                 0.5 * kron<cxd>(id, ldl) -
                 0.5 * kron<cxd>(ldl.transpose(), id));
  }
  return g;
}

CriterionResult c13_oracle_equivalence(const AcceptanceOptions& opt) {
  CriterionResult r{13, "order-N equals brute force on small baths", false, ""};
  double worst_cce = 0, worst_gcce = 0, worst_me = 0;
  const PulseSequence seq = PulseSequence::hahn_echo();
  TimeGrid grid;
  grid.t_min_us = 0.5;
  grid.t_max_us = 300.0;
  grid.points_per_decade = 4;
  const std::vector<double> times = grid.times();

  for (int s = 0; s < 100; ++s) {
    const int n_spins = 1 + (s % 4);
    BathRealization bath;
    bath.seed = task_seed(opt.seed, "c13" + std::to_string(s));
    Rng rng = make_rng(bath.seed);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < n_spins; ++i) {
      BathSpin sp;
      sp.id = i;
      sp.species = species_by_name("e");
      for (;;) {
        sp.position = Vec3(u(rng), u(rng), u(rng));
        bool ok = sp.position.norm() > 1.5;
        for (const BathSpin& prev : bath.spins)
          ok = ok && (prev.position - sp.position).norm() > 0.9;
        if (ok) break;
      }
      bath.spins.push_back(sp);
    }
    CentralSpin nv = make_nv(Vec3::Zero(), Vec3::UnitZ());
    ExternalField f = field_along(nv.axis, 400.0);
    CceOptions copt;
    copt.max_order = n_spins;
    copt.r_connect_electron_nm = 1e4;
    copt.grid = grid;
    copt.workers = 1;

    const BathView view = make_view(nv, f, bath);
    std::vector<int> all(n_spins);
    for (int i = 0; i < n_spins; ++i) all[i] = i;
    const ClusterSpec spec = make_cluster_spec(view, all);
    const MatrixXcd h0 = conditioned_bath_hamiltonian(spec, 0.0);
    const MatrixXcd h1 = conditioned_bath_hamiltonian(spec, -1.0);
    const int d = spec.dim();

    // closed CCE vs conditioned brute force
    {
      const auto engine = cce_coherence(bath, nv, f, seq, copt);
      const HermitianExp e0(h0), e1(h1);
      for (std::size_t k = 0; k < times.size(); ++k) {
        cxd exact = 1.0;
        if (times[k] > 0.0) {
          const double tau = times[k] / 2.0;
          const MatrixXcd ua = e1.propagator(tau) * e0.propagator(tau);
          const MatrixXcd ub = e0.propagator(tau) * e1.propagator(tau);
          exact = (ua * ub.adjoint()).trace() / static_cast<double>(d);
        }
        worst_cce = std::max(worst_cce, std::abs(engine.values[k] - exact));
      }
    }

    // gCCE vs full-Hilbert-space brute force
    {
      const auto engine = gcce_coherence(bath, nv, f, seq, copt);
      const MatrixXcd hc = build_central(nv, f);
      MatrixXcd h = kron<cxd>(hc, MatrixXcd::Identity(d, d));
      h += build_interaction(spec);
      h += kron<cxd>(MatrixXcd::Identity(3, 3), build_bath(spec));
      const CentralSubspace sub = central_subspace(hc, 0, -1);
      const MatrixXcd pulse =
          kron<cxd>(sub.pulse(0.0), MatrixXcd::Identity(d, d));
      const VectorXcd psi_nv = (sub.u0 + sub.u1) / std::sqrt(2.0);
      const MatrixXcd rho0 =
          kron<cxd>((psi_nv * psi_nv.adjoint()).eval(),
                    (MatrixXcd::Identity(d, d) / double(d)).eval());
      const MatrixXcd proj =
          kron<cxd>((sub.u1 * sub.u0.adjoint()).eval(),
                    MatrixXcd::Identity(d, d));
      const HermitianExp eh(h);
      for (std::size_t k = 0; k < times.size(); ++k) {
        cxd exact = 1.0;
        if (times[k] > 0.0) {
          const MatrixXcd half = eh.propagator(times[k] / 2.0);
          const MatrixXcd uu = half * pulse * half;
          exact = (rho0 * (uu.adjoint() * proj * uu)).trace() / 0.5;
        }
        worst_gcce = std::max(worst_gcce, std::abs(engine.values[k] - exact));
      }
    }

    // ME-CCE vs dense exponential of the projected Liouvillian
    {
      ChannelConfig cfg;
      cfg.t1_us = 20.0;
      const auto engine = mecce_coherence(bath, nv, f, seq, copt, cfg);
      const double gamma = 1.0 / (kTwoPi * cfg.t1_us);
      std::vector<std::pair<MatrixXcd, double>> jumps;
      const std::vector<int> dims = spec.dims();
      for (int i = 0; i < n_spins; ++i) {
        jumps.push_back({embed<cxd>(spec.ops[i].sp, i, dims), gamma});
        jumps.push_back({embed<cxd>(spec.ops[i].sm, i, dims), gamma});
      }
      const MatrixXcd ga = oracle_liouvillian(h0, h1, jumps);
      const MatrixXcd gb = oracle_liouvillian(h1, h0, jumps);
      for (std::size_t k = 0; k < times.size(); ++k) {
        cxd exact = 1.0;
        if (times[k] > 0.0) {
          const double tau = times[k] / 2.0;
          const MatrixXcd ea = (ga * tau).exp();
          const MatrixXcd eb = (gb * tau).exp();
          MatrixXcd rho = MatrixXcd::Identity(d, d) / double(d);
          VectorXcd v = Eigen::Map<VectorXcd>(rho.data(), d * d);
          v = eb * (ea * v).eval();
          cxd tr = 0;
          for (int i = 0; i < d; ++i) tr += v(i * d + i);
          exact = tr;
        }
        worst_me = std::max(worst_me, std::abs(engine.values[k] - exact));
      }
    }
  }
  r.pass = worst_cce <= 1e-7 && worst_gcce <= 1e-7 && worst_me <= 1e-7;
  r.detail = "max deviations: cce " + fmt1(worst_cce) + ", gcce " +
             fmt1(worst_gcce) + ", mecce " + fmt1(worst_me) + " (<= 1e-7)";
  return r;
}

CriterionResult c14_stark_insensitivity(const AcceptanceOptions& opt) {
  CriterionResult r{14, "T2 insensitive to 40 MHz transverse mixing", false,
                    ""};
  double t2[2] = {0, 0};
  for (int variant = 0; variant < 2; ++variant) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::bulk;
    cfg.method = Method::gcce;
    cfg.order = 2;
    cfg.seed = task_seed(opt.seed, "c14");  // same baths in both variants
    cfg.n_configs = 6;
    cfg.geometry.c13_radius_nm = 4.0;
    cfg.field.e_transverse_mhz = variant == 0 ? 0.0 : 40.0;
    cfg.grid.t_min_us = 10.0;
    cfg.grid.t_max_us = 1e4;
    cfg.grid.points_per_decade = 10;
    cfg.grid.lock_period_us = revival_period_us(species_by_name("13C"), 400.0);
    const MeanRun run = run_mean(cfg, SweepCell{}, opt);
    t2[variant] = run.stats.mean_t2;
  }
  const double rel = std::abs(t2[1] / t2[0] - 1.0);
  r.pass = rel < 0.02;
  r.detail = "T2(E_eff = 0) = " + fmt1(t2[0]) + " us, T2(40 MHz) = " +
             fmt1(t2[1]) + " us, relative difference " + fmt1(rel) +
             " (< 0.02)";
  return r;
}

CriterionResult c15_determinism(const AcceptanceOptions& opt) {
  CriterionResult r{15, "worker-count independent numeric output", false, ""};
  namespace fs = std::filesystem;
  const std::string base =
      opt.scratch_dir.empty() ? std::string("acceptance_scratch")
                              : opt.scratch_dir;
  ExperimentConfig cfg = bulk_config(task_seed(opt.seed, "c15"), 4, 4.0);
  cfg.grid.points_per_decade = 8;

  auto run_with = [&](int workers, const std::string& dir) {
    ExperimentConfig c = cfg;
    c.out_dir = dir;
    fs::remove_all(dir);
    run_experiment(c, false, workers);
  };
  run_with(1, base + "/w1");
  run_with(2, base + "/w2");

  bool identical = true;
  std::string first_diff;
  for (const auto& entry : fs::recursive_directory_iterator(base + "/w1")) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".csv") continue;
    const std::string rel =
        fs::relative(entry.path(), base + "/w1").string();
    std::ifstream a(entry.path(), std::ios::binary);
    std::ifstream b(base + "/w2/" + rel, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (sa.str() != sb.str()) {
      identical = false;
      first_diff = rel;
      break;
    }
  }
  r.pass = identical;
  r.detail = identical ? "all CSV outputs byte-identical for 1 vs 2 workers"
                       : "first differing file: " + first_diff;
  return r;
}

}  // namespace

int criterion_count() { return 15; }

std::string criterion_name(int n) {
  switch (n) {
    case 1: return "bulk-13c-t2";
    case 2: return "near-surface-ratio";
    case 3: return "bare-surface-convergence";
    case 4: return "fluorine-orientation-ordering";
    case 5: return "stretch-crossover";
    case 6: return "electron-t2-depth-trend";
    case 7: return "sweet-spot-111";
    case 8: return "me-limits";
    case 9: return "relaxation-minimum";
    case 10: return "hopping-exponent-xy4";
    case 11: return "hole-fraction-monotone";
    case 12: return "temperature-quench";
    case 13: return "oracle-equivalence";
    case 14: return "stark-insensitivity";
    case 15: return "determinism";
  }
  throw ConfigError("criterion number out of range");
}

CriterionResult run_criterion(int number, const AcceptanceOptions& opt) {
  switch (number) {
    case 1: return c1_bulk_t2(opt);
    case 2: return c2_near_surface_ratio(opt);
    case 3: return c3_bare_convergence(opt);
    case 4: return c4_fluorine_ordering(opt);
    case 5: return c5_stretch_crossover(opt);
    case 6: return c6_t2_depth_trend(opt);
    case 7: return c7_sweet_spot(opt);
    case 8: return c8_me_limits(opt);
    case 9: return c9_relaxation_minimum(opt);
    case 10: return c10_hopping(opt);
    case 11: return c11_hole_fraction(opt);
    case 12: return c12_temperature_quench(opt);
    case 13: return c13_oracle_equivalence(opt);
    case 14: return c14_stark_insensitivity(opt);
    case 15: return c15_determinism(opt);
  }
  throw ConfigError("criterion number out of range");
}

}  // namespace spinbath
