#include "spinbath/experiment.hpp"

#include "spinbath/acceptance.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/threading.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinbath {

using nlohmann::json;

Scenario scenario_from_string(const std::string& s) {
  if (s == "bulk") return Scenario::bulk;
  if (s == "nuclear_surface") return Scenario::nuclear_surface;
  if (s == "static_electrons") return Scenario::static_electrons;
  if (s == "relaxing_electrons") return Scenario::relaxing_electrons;
  if (s == "hopping_electrons") return Scenario::hopping_electrons;
  if (s == "pseudospin_scan") return Scenario::pseudospin_scan;
  if (s == "temperature_scan") return Scenario::temperature_scan;
  throw ConfigError("unknown scenario '" + s + "'");
}

Method method_from_string(const std::string& s) {
  if (s == "cce") return Method::cce;
  if (s == "gcce") return Method::gcce;
  if (s == "mecce") return Method::mecce;
  if (s == "megcce") return Method::megcce;
  if (s == "pseudospin") return Method::pseudospin;
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::bulk: return "bulk";
    case Scenario::nuclear_surface: return "nuclear_surface";
    case Scenario::static_electrons: return "static_electrons";
    case Scenario::relaxing_electrons: return "relaxing_electrons";
    case Scenario::hopping_electrons: return "hopping_electrons";
    case Scenario::pseudospin_scan: return "pseudospin_scan";
    case Scenario::temperature_scan: return "temperature_scan";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::cce: return "cce";
    case Method::gcce: return "gcce";
    case Method::mecce: return "mecce";
    case Method::megcce: return "megcce";
    case Method::pseudospin: return "pseudospin";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (n_configs < 1) throw ConfigError("n_configs must be >= 1");
  if (order < 1 || order > 4) throw ConfigError("order must lie in [1, 4]");
  if (geometry.depth_nm.empty()) throw ConfigError("depth sweep is empty");
  if (scenario == Scenario::hopping_electrons &&
      !(method == Method::mecce || method == Method::megcce))
    throw ConfigError("hopping requires a master-equation method (mecce)");
  if (scenario == Scenario::relaxing_electrons &&
      !(method == Method::mecce || method == Method::megcce))
    throw ConfigError("finite T1 requires a master-equation method (mecce)");
  if (scenario == Scenario::pseudospin_scan && method != Method::pseudospin)
    throw ConfigError("pseudospin_scan requires method = pseudospin");
  if (scenario != Scenario::pseudospin_scan && method == Method::pseudospin)
    throw ConfigError("method pseudospin only fits the pseudospin_scan");
  for (double d : geometry.depth_nm)
    if (d <= 0.0) throw ConfigError("depths must be positive");
  if (geometry.electron_density_nm2.empty() || geometry.hole_fraction.empty() ||
      channels.t1_us.empty() || temperature_mk.empty())
    throw ConfigError("sweep axes must be non-empty");
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["scenario"] = to_string(scenario);
  j["method"] = to_string(method);
  j["order"] = order;
  j["sequence"] = sequence.name();
  j["seed"] = seed;
  j["n_configs"] = n_configs;
  j["geometry"]["orientation"] = spinbath::to_string(geometry.orientation);
  j["geometry"]["termination"] = spinbath::to_string(geometry.termination);
  j["geometry"]["depth_nm"] = geometry.depth_nm;
  j["geometry"]["include_c13"] = geometry.include_c13;
  j["geometry"]["c13_abundance"] = geometry.c13_abundance;
  j["geometry"]["c13_radius_nm"] = geometry.c13_radius_nm;
  j["geometry"]["surface_lateral_radius_nm"] = geometry.surface_lateral_radius_nm;
  j["geometry"]["electron_density_nm2"] = geometry.electron_density_nm2;
  j["geometry"]["hole_fraction"] = geometry.hole_fraction;
  j["geometry"]["lateral_extent_nm"] = geometry.lateral_extent_nm;
  j["geometry"]["electron_cutoff_nm"] = geometry.electron_cutoff_nm;
  if (geometry.axis_tilt_deg) j["geometry"]["axis_tilt_deg"] = *geometry.axis_tilt_deg;
  if (!geometry.bath_file.empty()) j["geometry"]["bath_file"] = geometry.bath_file;
  j["field"]["b_gauss"] = field.b_gauss;
  j["field"]["e_transverse_mhz"] = field.e_transverse_mhz;
  j["field"]["electric_v_per_m"] = {field.electric_v_per_m.x(),
                                    field.electric_v_per_m.y(),
                                    field.electric_v_per_m.z()};
  j["channels"]["t1_us"] = channels.t1_us;
  j["channels"]["gamma_nv_us"] = channels.gamma_nv_us;
  j["channels"]["hopping"] = channels.hopping;
  j["channels"]["t_hop_us"] = channels.hop.t_hop_us;
  j["channels"]["r_hop_nm"] = channels.hop.r_hop_nm;
  j["channels"]["two_pi_prefactor"] = channels.hop.two_pi_prefactor;
  j["temperature_mk"] = temperature_mk;
  j["time_grid"]["t_min_us"] = grid.t_min_us;
  j["time_grid"]["t_max_us"] = grid.t_max_us;
  j["time_grid"]["points_per_decade"] = grid.points_per_decade;
  j["time_grid"]["lock_period_us"] = grid.lock_period_us;
  j["cce"]["r_connect_electron_nm"] = cce.r_connect_electron_nm;
  j["cce"]["r_connect_nuclear_nm"] = cce.r_connect_nuclear_nm;
  j["cce"]["r_connect_mixed_nm"] = cce.r_connect_mixed_nm;
  j["cce"]["divisor_guard"] = cce.divisor_guard;
  j["pseudospin_pairs"] = pseudospin_pairs;
  return j.dump();
}

std::string ExperimentConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json())));
  return buf;
}

namespace {

template <class T>
T get_or(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

std::vector<double> get_list(const json& j, const std::string& key,
                             const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.scenario = scenario_from_string(get_or<std::string>(j, "scenario", "bulk"));
    c.method = method_from_string(get_or<std::string>(j, "method", "cce"));
    c.order = get_or<int>(j, "order", 2);
    c.sequence = PulseSequence::from_string(get_or<std::string>(j, "sequence", "hahn"));
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    c.n_configs = get_or<int>(j, "n_configs", 1);
    if (j.contains("geometry")) {
      const json& g = j.at("geometry");
      c.geometry.orientation =
          orientation_from_string(get_or<std::string>(g, "orientation", "100"));
      c.geometry.termination =
          termination_from_string(get_or<std::string>(g, "termination", "bare"));
      c.geometry.depth_nm = get_list(g, "depth_nm", {5.0});
      c.geometry.include_c13 = get_or<bool>(g, "include_c13", false);
      c.geometry.c13_abundance = get_or<double>(g, "c13_abundance", 0.011);
      c.geometry.c13_radius_nm = get_or<double>(g, "c13_radius_nm", 6.0);
      c.geometry.surface_lateral_radius_nm =
          get_or<double>(g, "surface_lateral_radius_nm", 0.0);
      c.geometry.electron_density_nm2 =
          get_list(g, "electron_density_nm2", {0.0});
      c.geometry.hole_fraction = get_list(g, "hole_fraction", {0.0});
      c.geometry.lateral_extent_nm = get_or<double>(g, "lateral_extent_nm", 0.0);
      c.geometry.electron_cutoff_nm = get_or<double>(g, "electron_cutoff_nm", 0.0);
      if (g.contains("axis_tilt_deg"))
        c.geometry.axis_tilt_deg = g.at("axis_tilt_deg").get<double>();
      c.geometry.bath_file = get_or<std::string>(g, "bath_file", "");
    }
    if (j.contains("field")) {
      const json& f = j.at("field");
      c.field.b_gauss = get_or<double>(f, "b_gauss", 400.0);
      c.field.e_transverse_mhz = get_or<double>(f, "e_transverse_mhz", 0.0);
      if (f.contains("electric_v_per_m")) {
        const auto v = f.at("electric_v_per_m").get<std::vector<double>>();
        if (v.size() != 3) throw ConfigError("electric field needs 3 entries");
        c.field.electric_v_per_m = Vec3(v[0], v[1], v[2]);
      }
    }
    if (j.contains("channels")) {
      const json& ch = j.at("channels");
      c.channels.t1_us = get_list(ch, "t1_us", {0.0});
      c.channels.gamma_nv_us = get_or<double>(ch, "gamma_nv_us", 0.0);
      c.channels.hopping = get_or<bool>(ch, "hopping", false);
      c.channels.hop.t_hop_us = get_or<double>(ch, "t_hop_ns", 10.0) * 1e-3;
      c.channels.hop.r_hop_nm = get_or<double>(ch, "r_hop_nm", 5.0);
      c.channels.hop.two_pi_prefactor =
          get_or<bool>(ch, "two_pi_prefactor", false);
    }
    c.temperature_mk = get_list(j, "temperature_mk", {0.0});
    if (j.contains("time_grid")) {
      const json& t = j.at("time_grid");
      c.grid.t_min_us = get_or<double>(t, "t_min_us", 0.1);
      c.grid.t_max_us = get_or<double>(t, "t_max_us", 1e4);
      c.grid.points_per_decade = get_or<int>(t, "points_per_decade", 64);
      c.grid.lock_period_us = get_or<double>(t, "lock_period_us", 0.0);
    }
    if (j.contains("cce")) {
      const json& o = j.at("cce");
      c.cce.r_connect_electron_nm = get_or<double>(o, "r_connect_electron_nm", 8.0);
      c.cce.r_connect_nuclear_nm = get_or<double>(o, "r_connect_nuclear_nm", 0.9);
      c.cce.r_connect_mixed_nm = get_or<double>(o, "r_connect_mixed_nm", 2.0);
      c.cce.divisor_guard = get_or<double>(o, "divisor_guard", 1e-6);
    }
    c.pseudospin_pairs = get_or<int>(j, "pseudospin_pairs", 200);
    if (j.contains("output")) c.out_dir = get_or<std::string>(j.at("output"), "dir", "out");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string SweepCell::id() const {
  std::ostringstream os;
  os << "d" << depth_nm;
  if (density_nm2 > 0.0) os << "_rho" << density_nm2;
  if (t1_us > 0.0) os << "_t1_" << t1_us;
  if (hole_fraction > 0.0) os << "_ph" << hole_fraction;
  if (temperature_mk > 0.0) os << "_mk" << temperature_mk;
  return os.str();
}

std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg) {
  std::vector<SweepCell> cells;
  for (double d : cfg.geometry.depth_nm)
    for (double rho : cfg.geometry.electron_density_nm2)
      for (double t1 : cfg.channels.t1_us)
        for (double ph : cfg.geometry.hole_fraction)
          for (double mk : cfg.temperature_mk) {
            SweepCell c;
            c.depth_nm = d;
            c.density_nm2 = rho;
            c.t1_us = t1;
            c.hole_fraction = ph;
            c.temperature_mk = mk;
            cells.push_back(c);
          }
  return cells;
}

namespace {

struct CellSetup {
  BathRealization bath;
  CentralSpin nv;
  ExternalField field;
  CceOptions opt;
  ChannelConfig channels;
};

CellSetup assemble_cell(const ExperimentConfig& cfg, const SweepCell& cell,
                        std::uint64_t member_seed, int workers) {
  CellSetup s;
  SurfaceConfig surf;
  surf.orientation = cfg.geometry.orientation;
  surf.termination = cfg.geometry.termination;
  surf.electron_density_nm2 = cell.density_nm2;
  surf.hole_fraction = cell.hole_fraction;
  surf.lateral_extent_nm = cfg.geometry.lateral_extent_nm;
  surf.seed = task_seed(member_seed, "electrons");

  if (cfg.scenario == Scenario::bulk) {
    s.nv = make_nv(Vec3::Zero(), Vec3(1, 1, 1).normalized());
    s.field = field_along(s.nv.axis, cfg.field.b_gauss);
    BulkRegion reg;
    reg.center = s.nv.position;
    reg.radius_nm = cfg.geometry.c13_radius_nm;
    s.bath = sample_bulk_c13(reg, cfg.geometry.c13_abundance,
                             task_seed(member_seed, "c13"));
  } else {
    NVPlacement place;
    place.depth_nm = cell.depth_nm;
    if (cfg.geometry.axis_tilt_deg) {
      place.axis_tilt_deg = *cfg.geometry.axis_tilt_deg;
      place.tilt_overridden = true;
    }
    auto [nv, field] = place_nv(surf, place, cfg.field.b_gauss);
    s.nv = nv;
    s.field = field;

    if (!cfg.geometry.bath_file.empty()) {
      s.bath = read_bath_file(cfg.geometry.bath_file);
    } else {
      switch (cfg.scenario) {
        case Scenario::nuclear_surface: {
          double lat = cfg.geometry.surface_lateral_radius_nm;
          if (lat <= 0.0) lat = std::max(6.0, 3.0 * cell.depth_nm);
          s.bath = generate_surface_lattice(surf.orientation, surf.termination,
                                            lat, task_seed(member_seed, "surf"));
          break;
        }
        case Scenario::static_electrons:
        case Scenario::relaxing_electrons:
        case Scenario::hopping_electrons:
        case Scenario::temperature_scan: {
          s.bath = sample_surface_electrons(surf);
          double cut = cfg.geometry.electron_cutoff_nm;
          if (cut <= 0.0) cut = std::max(30.0, 5.0 * cell.depth_nm);
          s.bath = restrict_to_ball(s.bath, s.nv.position, cut);
          break;
        }
        default:
          throw ConfigError("scenario not handled by assemble_cell");
      }
    }
    if (cfg.geometry.include_c13) {
      BulkRegion reg;
      reg.center = s.nv.position;
      reg.radius_nm = cfg.geometry.c13_radius_nm;
      reg.truncate_at_surface = true;
      const BathRealization c13 = sample_bulk_c13(
          reg, cfg.geometry.c13_abundance, task_seed(member_seed, "c13"));
      s.bath = merge(s.bath, c13);
    }
  }

  s.nv.e_transverse = mhz_to_rad_us(cfg.field.e_transverse_mhz);
  s.field.electric_v_per_m = cfg.field.electric_v_per_m;

  s.opt = cfg.cce;
  s.opt.max_order = cfg.order;
  s.opt.grid = cfg.grid;
  s.opt.workers = workers;
  s.opt.gibbs_temperature_k = cell.temperature_mk * 1e-3;
  if (s.opt.grid.lock_period_us < 0.0) s.opt.grid.lock_period_us = 0.0;

  s.channels.gamma_nv_us = cfg.channels.gamma_nv_us;
  s.channels.t1_us = cell.t1_us;
  s.channels.hopping = cfg.channels.hopping &&
                       cfg.scenario == Scenario::hopping_electrons;
  s.channels.hop = cfg.channels.hop;
  return s;
}

}  // namespace

CoherenceCurve run_cell_member(const ExperimentConfig& cfg,
                               const SweepCell& cell,
                               std::uint64_t member_seed, int workers) {
  CellSetup s = assemble_cell(cfg, cell, member_seed, workers);
  CoherenceCurve out;
  switch (cfg.method) {
    case Method::cce:
      out = cce_coherence(s.bath, s.nv, s.field, cfg.sequence, s.opt);
      break;
    case Method::gcce:
      out = gcce_coherence(s.bath, s.nv, s.field, cfg.sequence, s.opt);
      break;
    case Method::mecce:
      out = mecce_coherence(s.bath, s.nv, s.field, cfg.sequence, s.opt,
                            s.channels);
      break;
    case Method::megcce:
      out = megcce_coherence(s.bath, s.nv, s.field, cfg.sequence, s.opt,
                             s.channels);
      break;
    case Method::pseudospin:
      throw ConfigError("pseudospin scans run through run_experiment");
  }
  out.seed = member_seed;
  return out;
}

namespace {

json load_manifest(const std::string& path) {
  if (!file_exists(path)) return json::object();
  std::ifstream is(path);
  json j;
  try {
    is >> j;
  } catch (...) {
    return json::object();
  }
  return j;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, bool resume,
                          int workers) {
  cfg.validate();
  RunSummary summary;
  const std::string out = cfg.out_dir;
  ensure_directory(out);
  const std::string manifest_path = out + "/manifest.json";
  summary.manifest_path = manifest_path;
  const std::string cfg_hash = cfg.hash();

  json manifest = resume ? load_manifest(manifest_path) : json::object();
  const bool hash_matches =
      manifest.contains("config_hash") && manifest["config_hash"] == cfg_hash;
  if (resume && !hash_matches) manifest = json::object();
  manifest["config_hash"] = cfg_hash;
  manifest["engine_version"] = "spinbath 1.0";
  manifest["config"] = json::parse(cfg.canonical_json());
  if (!manifest.contains("tasks")) manifest["tasks"] = json::object();

  if (cfg.scenario == Scenario::pseudospin_scan) {
    // scan over the depth grid with the configured surface
    SurfaceConfig surf;
    surf.orientation = cfg.geometry.orientation;
    surf.electron_density_nm2 = cfg.geometry.electron_density_nm2.front();
    surf.lateral_extent_nm = cfg.geometry.lateral_extent_nm;
    const auto rows = pseudospin_depth_scan(
        surf, cfg.geometry.depth_nm, task_seed(cfg.seed, "scan"),
        cfg.pseudospin_pairs, cfg.field.b_gauss);
    write_scan_csv(out + "/pseudospin_scan.csv", rows);
    manifest["tasks"]["pseudospin_scan"] = {{"status", "done"},
                                            {"files", {"pseudospin_scan.csv"}}};
    atomic_write(manifest_path, manifest.dump(2) + "\n");
    summary.cells = 1;
    summary.members_computed = static_cast<int>(rows.size());
    return summary;
  }

  const std::vector<SweepCell> cells = sweep_cells(cfg);
  summary.cells = static_cast<int>(cells.size());

  // flatten (cell, member) into independent tasks
  struct Task {
    std::size_t cell_index;
    int member;
    std::string curve_path;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const std::string cell_dir = out + "/" + cells[ci].id();
    ensure_directory(cell_dir);
    for (int m = 0; m < cfg.n_configs; ++m) {
      Task t;
      t.cell_index = ci;
      t.member = m;
      t.curve_path = cell_dir + "/config_" + std::to_string(m) + ".csv";
      t.seed = task_seed(cfg.seed, cells[ci].id() + "/" + std::to_string(m));
      tasks.push_back(std::move(t));
    }
  }

  std::vector<char> computed(tasks.size(), 0);
  std::vector<std::string> task_errors(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    if (resume && hash_matches && file_exists(t.curve_path)) return;
    try {
      // engine-internal threading off: parallelism lives at the task level
      const CoherenceCurve c =
          run_cell_member(cfg, cells[t.cell_index], t.seed, 1);
      write_curve_csv(t.curve_path, c);
      write_curve_sidecar(t.curve_path + ".json", c, cfg_hash);
      computed[i] = 1;
    } catch (const std::exception& e) {
      task_errors[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (computed[i])
      ++summary.members_computed;
    else if (task_errors[i].empty())
      ++summary.members_reused;
  }

  // per-cell aggregation, rebuilt from files so resume runs are identical
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const std::string cell_dir = out + "/" + cells[ci].id();
    std::vector<std::pair<std::string, FitResult>> fit_rows;
    std::vector<CoherenceCurve> curves;
    json files = json::array();
    bool failed = false;
    for (int m = 0; m < cfg.n_configs; ++m) {
      const std::string path = cell_dir + "/config_" + std::to_string(m) + ".csv";
      if (!file_exists(path)) {
        failed = true;
        continue;
      }
      files.push_back(cells[ci].id() + "/config_" + std::to_string(m) + ".csv");
      CoherenceCurve c = read_curve_csv(path);
      curves.push_back(c);
      try {
        fit_rows.push_back({"config_" + std::to_string(m), fit_stretched(c)});
      } catch (const NumericError&) {
        // curve does not decay on this grid; excluded from statistics
      }
    }
    if (!curves.empty()) {
      write_curve_csv(cell_dir + "/mean.csv", mean_curve(curves));
      write_fits_csv(cell_dir + "/fits.csv", fit_rows);
      if (!fit_rows.empty()) {
        std::vector<FitResult> fits;
        for (const auto& [id, r] : fit_rows) fits.push_back(r);
        write_aggregate_json(cell_dir + "/aggregate.json", aggregate(fits),
                             cells[ci].id());
      }
    }
    manifest["tasks"][cells[ci].id()] = {
        {"status", failed ? "partial" : "done"}, {"files", files}};
  }
  atomic_write(manifest_path, manifest.dump(2) + "\n");

  // surface first task error, if any, after persisting progress
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!task_errors[i].empty())
      throw NumericError("task " + cells[tasks[i].cell_index].id() +
                         "/config_" + std::to_string(tasks[i].member) +
                         " failed: " + task_errors[i]);
  return summary;
}

bool RecipeReport::all_pass() const {
  for (const RecipeRow& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

// Recipes map onto the acceptance criteria they reproduce.
namespace {

const std::map<std::string, std::vector<int>>& recipe_map() {
  static const std::map<std::string, std::vector<int>> m = {
      {"bulk-t2", {1}},
      {"termination-scan", {2, 3}},
      {"orientation-scan", {4, 7}},
      {"static-electron-scan", {5, 6}},
      {"relaxation-scan", {8, 9}},
      {"hopping-vs-static", {10}},
      {"xy4-ratio", {10}},
      {"temperature-quench", {12}},
      {"hole-fraction", {11}},
  };
  return m;
}

}  // namespace

std::vector<std::string> recipe_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : recipe_map()) names.push_back(k);
  return names;
}

RecipeReport reproduce(const std::string& recipe, const std::string& out_dir,
                       int workers, std::uint64_t seed) {
  const auto it = recipe_map().find(recipe);
  if (it == recipe_map().end()) {
    std::string known;
    for (const auto& n : recipe_names()) known += n + " ";
    throw ConfigError("unknown recipe '" + recipe + "'; available: " + known);
  }
  RecipeReport report;
  report.recipe = recipe;
  AcceptanceOptions opt;
  opt.workers = workers;
  opt.seed = seed == 1 ? 20260808 : seed;
  opt.scratch_dir = out_dir;
  for (int n : it->second) {
    const CriterionResult res = run_criterion(n, opt);
    report.rows.push_back({criterion_name(n), res.pass, res.detail});
  }
  return report;
}

}  // namespace spinbath
