#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spinbath/errors.hpp"
#include "spinbath/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spinbath;
namespace fs = std::filesystem;

namespace {

std::string small_bulk_json(const std::string& out_dir) {
  std::ostringstream os;
  os << R"({
    "scenario": "bulk",
    "method": "cce",
    "order": 2,
    "sequence": "hahn",
    "seed": 99,
    "n_configs": 3,
    "geometry": {"c13_radius_nm": 3.5},
    "time_grid": {"t_min_us": 20, "t_max_us": 10000, "points_per_decade": 6,
                  "lock_period_us": 4.669},
    "output": {"dir": ")"
     << out_dir << R"("}
  })";
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing and validation") {
  SUBCASE("round trip of a small config") {
    const ExperimentConfig cfg = parse_experiment_config(small_bulk_json("x"));
    CHECK(cfg.scenario == Scenario::bulk);
    CHECK(cfg.n_configs == 3);
    CHECK(cfg.geometry.c13_radius_nm == 3.5);
    CHECK(cfg.grid.points_per_decade == 6);
    CHECK(cfg.out_dir == "x");
  }
  SUBCASE("invalid JSON rejected") {
    CHECK_THROWS_AS(parse_experiment_config("{nope"), ConfigError);
  }
  SUBCASE("incompatible method and scenario rejected") {
    CHECK_THROWS_AS(
        parse_experiment_config(
            R"({"scenario": "hopping_electrons", "method": "cce"})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_experiment_config(
            R"({"scenario": "bulk", "method": "pseudospin"})"),
        ConfigError);
  }
  SUBCASE("unknown scenario rejected") {
    CHECK_THROWS_AS(parse_experiment_config(R"({"scenario": "warp"})"),
                    ConfigError);
  }
  SUBCASE("hash is stable and sensitive") {
    ExperimentConfig a = parse_experiment_config(small_bulk_json("x"));
    ExperimentConfig b = parse_experiment_config(small_bulk_json("x"));
    CHECK(a.hash() == b.hash());
    b.seed = 100;
    CHECK(a.hash() != b.hash());
  }
}

TEST_CASE("sweep cells") {
  ExperimentConfig cfg;
  cfg.geometry.depth_nm = {1.0, 2.0};
  cfg.geometry.electron_density_nm2 = {0.01, 0.05};
  cfg.channels.t1_us = {0.0, 10.0};
  const auto cells = sweep_cells(cfg);
  CHECK(cells.size() == 8);
  CHECK(cells[0].id() != cells[1].id());
}

TEST_CASE("run, manifest, resume") {
  const std::string out = "test_out_experiment";
  fs::remove_all(out);
  const ExperimentConfig cfg = parse_experiment_config(small_bulk_json(out));

  const RunSummary first = run_experiment(cfg, false, 2);
  CHECK(first.cells == 1);
  CHECK(first.members_computed == 3);
  CHECK(fs::exists(out + "/manifest.json"));
  CHECK(fs::exists(out + "/d5/config_0.csv"));
  CHECK(fs::exists(out + "/d5/config_2.csv"));
  CHECK(fs::exists(out + "/d5/fits.csv"));
  CHECK(fs::exists(out + "/d5/aggregate.json"));
  CHECK(fs::exists(out + "/d5/mean.csv"));

  SUBCASE("resume with nothing missing recomputes nothing") {
    const RunSummary again = run_experiment(cfg, true, 2);
    CHECK(again.members_computed == 0);
    CHECK(again.members_reused == 3);
  }

  SUBCASE("resume after deleting one member redoes only that member") {
    const std::string victim = out + "/d5/config_1.csv";
    const std::string keeper = out + "/d5/config_0.csv";
    const std::string keeper_before = slurp(keeper);
    fs::remove(victim);
    const RunSummary again = run_experiment(cfg, true, 2);
    CHECK(again.members_computed == 1);
    CHECK(again.members_reused == 2);
    CHECK(fs::exists(victim));
    CHECK(slurp(keeper) == keeper_before);
  }

  SUBCASE("changed config invalidates the resume cache") {
    ExperimentConfig changed = cfg;
    changed.seed = 1234;
    const RunSummary again = run_experiment(changed, true, 2);
    CHECK(again.members_computed == 3);
  }

  SUBCASE("worker count does not change file bytes") {
    const std::string a = slurp(out + "/d5/config_0.csv");
    fs::remove_all(out);
    run_experiment(cfg, false, 1);
    CHECK(slurp(out + "/d5/config_0.csv") == a);
  }
}

TEST_CASE("curve csv round trip") {
  CoherenceCurve c;
  c.times_us = {0.0, 1.5, 88.25};
  c.values = {cxd(1, 0), cxd(0.75, -0.01), cxd(0.1, 0.002)};
  const std::string path = "test_curve_roundtrip.csv";
  write_curve_csv(path, c);
  const CoherenceCurve back = read_curve_csv(path);
  REQUIRE(back.times_us.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(back.times_us[k] == doctest::Approx(c.times_us[k]).epsilon(1e-12));
    CHECK(std::abs(back.values[k] - c.values[k]) < 1e-12);
  }
  fs::remove(path);
}

TEST_CASE("pseudospin scan experiment writes the scan table") {
  const std::string out = "test_out_scan";
  fs::remove_all(out);
  ExperimentConfig cfg;
  cfg.scenario = Scenario::pseudospin_scan;
  cfg.method = Method::pseudospin;
  cfg.seed = 5;
  cfg.geometry.orientation = Orientation::o111;
  cfg.geometry.electron_density_nm2 = {0.01};
  cfg.geometry.depth_nm = {1.0, 2.0, 3.0, 4.0};
  cfg.pseudospin_pairs = 40;
  cfg.out_dir = out;
  run_experiment(cfg, false, 1);
  CHECK(fs::exists(out + "/pseudospin_scan.csv"));
  std::ifstream is(out + "/pseudospin_scan.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "d_nv_nm,omega_signed,t2_us");
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("recipe registry") {
  const auto names = recipe_names();
  CHECK(names.size() == 9);
  CHECK_THROWS_AS(reproduce("not-a-recipe", "x", 1), ConfigError);
}
