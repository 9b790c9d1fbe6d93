// Command-line front end: bath generation, experiment batches, curve
// fitting, reproduction recipes and manifest inspection.

#include "spinbath/acceptance.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/experiment.hpp"
#include "spinbath/io.hpp"
#include "spinbath/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

int log_level() {
  const char* env = std::getenv("SPINBATH_LOG");
  if (!env) return 1;
  try {
    return std::stoi(env);
  } catch (...) {
    return 1;
  }
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[spinbath] " << msg << "\n";
}

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitRecipe = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace spinbath;

  CLI::App app{"central-spin decoherence simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int workers = 0;
  bool resume = false;

  // generate: write a bath realization to a text table
  auto* gen = app.add_subcommand("generate", "generate a bath file");
  std::string gen_kind = "bulk";
  double gen_density = 0.01, gen_radius = 6.0, gen_abundance = 0.011;
  double gen_holes = 0.0, gen_extent = 0.0, gen_lateral = 10.0;
  std::string gen_orientation = "100", gen_termination = "F";
  std::string gen_out = "bath.txt";
  gen->add_option("--kind", gen_kind, "bulk | surface_lattice | electrons");
  gen->add_option("--orientation", gen_orientation, "100|110|111|113");
  gen->add_option("--termination", gen_termination, "bare|H|F|O|N");
  gen->add_option("--density", gen_density, "electron areal density, nm^-2");
  gen->add_option("--radius", gen_radius, "bulk region radius, nm");
  gen->add_option("--abundance", gen_abundance, "isotope abundance fraction");
  gen->add_option("--holes", gen_holes, "hole fraction in [0,1]");
  gen->add_option("--extent", gen_extent, "lateral extent, nm (0 = auto)");
  gen->add_option("--lateral-radius", gen_lateral, "lattice patch radius, nm");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", gen_out, "output bath file");

  // run: execute an experiment config
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "experiment JSON")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");
  run->add_option("--out", out_dir, "override the output directory");
  run->add_flag("--resume", resume, "reuse completed task outputs");

  // fit: stretched-exponential fits for curve files
  auto* fit = app.add_subcommand("fit", "fit curve CSV files");
  std::vector<std::string> fit_inputs;
  std::string fit_out = "fits.csv";
  fit->add_option("curves", fit_inputs, "curve CSV paths")->required();
  fit->add_option("--out", fit_out, "fit report CSV");

  // reproduce: named recipes with pass/fail tables
  auto* rep = app.add_subcommand("reproduce", "run a reproduction recipe");
  std::string recipe;
  rep->add_option("recipe", recipe, "recipe name (or 'list')")->required();
  rep->add_option("--out", out_dir, "scratch directory");
  rep->add_option("--workers", workers, "worker threads (0 = all cores)");
  rep->add_option("--seed", seed, "random seed");

  // inspect: summarize a run manifest
  auto* ins = app.add_subcommand("inspect", "inspect a run manifest");
  std::string manifest_path;
  ins->add_option("manifest", manifest_path, "manifest.json path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      BathRealization bath;
      if (gen_kind == "bulk") {
        BulkRegion reg;
        reg.radius_nm = gen_radius;
        bath = sample_bulk_c13(reg, gen_abundance, seed);
      } else if (gen_kind == "surface_lattice") {
        bath = generate_surface_lattice(
            orientation_from_string(gen_orientation),
            termination_from_string(gen_termination), gen_lateral, seed);
      } else if (gen_kind == "electrons") {
        SurfaceConfig cfg;
        cfg.orientation = orientation_from_string(gen_orientation);
        cfg.electron_density_nm2 = gen_density;
        cfg.hole_fraction = gen_holes;
        cfg.lateral_extent_nm = gen_extent;
        cfg.seed = seed;
        bath = sample_surface_electrons(cfg);
      } else {
        throw ConfigError("unknown --kind '" + gen_kind + "'");
      }
      write_bath_file(gen_out, bath);
      info("wrote " + gen_out + " (" + std::to_string(bath.spins.size()) +
           " spins, " + std::to_string(bath.holes.size()) + " holes)");
      return kExitOk;
    }

    if (run->parsed()) {
      ExperimentConfig cfg = load_experiment_config(config_path);
      if (run->count("--seed") > 0) cfg.seed = seed;
      if (run->count("--out") > 0) cfg.out_dir = out_dir;
      const RunSummary s = run_experiment(cfg, resume, workers);
      info("cells: " + std::to_string(s.cells) +
           ", members computed: " + std::to_string(s.members_computed) +
           ", reused: " + std::to_string(s.members_reused));
      info("manifest: " + s.manifest_path);
      return kExitOk;
    }

    if (fit->parsed()) {
      std::vector<std::pair<std::string, FitResult>> rows;
      for (const std::string& path : fit_inputs) {
        const CoherenceCurve c = read_curve_csv(path);
        rows.push_back({path, fit_stretched(c)});
      }
      write_fits_csv(fit_out, rows);
      info("wrote " + fit_out);
      return kExitOk;
    }

    if (rep->parsed()) {
      if (recipe == "list") {
        for (const auto& name : recipe_names()) std::cout << name << "\n";
        return kExitOk;
      }
      const RecipeReport report = reproduce(recipe, out_dir, workers, seed);
      for (const RecipeRow& row : report.rows)
        std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.name << ": "
                  << row.detail << "\n";
      return report.all_pass() ? kExitOk : kExitRecipe;
    }

    if (ins->parsed()) {
      std::ifstream is(manifest_path);
      if (!is) throw ConfigError("cannot open " + manifest_path);
      nlohmann::json j;
      is >> j;
      std::cout << "config hash: " << j.value("config_hash", "?") << "\n";
      std::cout << "engine:     " << j.value("engine_version", "?") << "\n";
      int done = 0, partial = 0;
      if (j.contains("tasks"))
        for (const auto& [key, task] : j["tasks"].items()) {
          const std::string status = task.value("status", "?");
          if (status == "done")
            ++done;
          else
            ++partial;
        }
      std::cout << "tasks:      " << done << " done, " << partial
                << " partial\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
