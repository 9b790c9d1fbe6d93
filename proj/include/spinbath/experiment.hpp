#pragma once

#include "spinbath/ensemble.hpp"
#include "spinbath/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spinbath {

enum class Scenario {
  bulk,
  nuclear_surface,
  static_electrons,
  relaxing_electrons,
  hopping_electrons,
  pseudospin_scan,
  temperature_scan,
};

enum class Method { cce, gcce, mecce, megcce, pseudospin };

Scenario scenario_from_string(const std::string& s);
Method method_from_string(const std::string& s);
std::string to_string(Scenario s);
std::string to_string(Method m);

struct GeometryConfig {
  Orientation orientation = Orientation::o100;
  Termination termination = Termination::bare;
  std::vector<double> depth_nm = {5.0};
  bool include_c13 = false;
  double c13_abundance = 0.011;
  double c13_radius_nm = 6.0;
  double surface_lateral_radius_nm = 0.0;  // 0 = auto (3x depth, min 6)
  std::vector<double> electron_density_nm2 = {0.0};
  std::vector<double> hole_fraction = {0.0};
  double lateral_extent_nm = 0.0;  // 0 = auto 40/sqrt(rho)
  double electron_cutoff_nm = 0.0; // 0 = auto max(30, 5x depth)
  std::optional<double> axis_tilt_deg;  // override the facet default
  std::string bath_file;  // when set, read sites from file instead
};

struct FieldConfig {
  double b_gauss = 400.0;
  double e_transverse_mhz = 0.0;
  Vec3 electric_v_per_m = Vec3::Zero();
};

struct ChannelSweepConfig {
  std::vector<double> t1_us = {0.0};
  double gamma_nv_us = 0.0;
  bool hopping = false;
  HoppingModel hop;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::bulk;
  Method method = Method::cce;
  int order = 2;
  PulseSequence sequence = PulseSequence::hahn_echo();
  std::uint64_t seed = 1;
  int n_configs = 1;
  GeometryConfig geometry;
  FieldConfig field;
  ChannelSweepConfig channels;
  std::vector<double> temperature_mk = {0.0};
  TimeGrid grid;
  CceOptions cce;  // grid/workers overridden at run time
  int pseudospin_pairs = 200;
  std::string out_dir = "out";

  void validate() const;
  std::string canonical_json() const;
  std::string hash() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// One sweep cell: a concrete parameter point of the grid.
struct SweepCell {
  double depth_nm = 5.0;
  double density_nm2 = 0.0;
  double t1_us = 0.0;
  double hole_fraction = 0.0;
  double temperature_mk = 0.0;

  std::string id() const;
};

std::vector<SweepCell> sweep_cells(const ExperimentConfig& cfg);

// Run one ensemble member of a cell; the entry point shared by the batch
// runner, the recipes and the acceptance suite.
CoherenceCurve run_cell_member(const ExperimentConfig& cfg,
                               const SweepCell& cell,
                               std::uint64_t member_seed, int workers);

struct RunSummary {
  int cells = 0;
  int members_computed = 0;
  int members_reused = 0;
  std::string manifest_path;
};

// Execute the full task grid with persistence and resume.
RunSummary run_experiment(const ExperimentConfig& cfg, bool resume,
                          int workers);

// Named reproduction recipes; each row checks one published trend at the
// tolerance used by the acceptance suite.
struct RecipeRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RecipeReport {
  std::string recipe;
  std::vector<RecipeRow> rows;
  bool all_pass() const;
};

std::vector<std::string> recipe_names();
RecipeReport reproduce(const std::string& recipe, const std::string& out_dir,
                       int workers, std::uint64_t seed = 1);

}  // namespace spinbath
