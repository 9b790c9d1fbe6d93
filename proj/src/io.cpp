#include "spinbath/io.hpp"

#include "spinbath/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinbath {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

bool file_exists(const std::string& path) {
  return std::filesystem::exists(path);
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + tmp);
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

void write_curve_csv(const std::string& path, const CoherenceCurve& curve) {
  std::ostringstream os;
  os << "t_us,re_L,im_L\n";
  for (std::size_t k = 0; k < curve.times_us.size(); ++k)
    os << fmt(curve.times_us[k]) << "," << fmt(curve.values[k].real()) << ","
       << fmt(curve.values[k].imag()) << "\n";
  atomic_write(path, os.str());
}

CoherenceCurve read_curve_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open curve file " + path);
  CoherenceCurve c;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double t, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) != 3)
      throw ConfigError("malformed curve row in " + path + ": " + line);
    c.times_us.push_back(t);
    c.values.emplace_back(re, im);
  }
  return c;
}

void write_curve_sidecar(const std::string& path, const CoherenceCurve& curve,
                         const std::string& config_hash) {
  nlohmann::json j;
  j["method"] = curve.method;
  j["order"] = curve.order;
  j["seed"] = curve.seed;
  j["config_hash"] = config_hash;
  j["divisor_guard_hits"] = curve.divisor_guard_hits;
  j["clip_hits"] = curve.clip_hits;
  j["points"] = curve.times_us.size();
  atomic_write(path, j.dump(2) + "\n");
}

void write_fits_csv(const std::string& path,
                    const std::vector<std::pair<std::string, FitResult>>& rows) {
  std::ostringstream os;
  os << "config_id,T2_us,n,T2_err,n_err,quality,one_over_e_us,extrapolated\n";
  for (const auto& [id, r] : rows)
    os << id << "," << fmt(r.t2_us) << "," << fmt(r.n) << "," << fmt(r.t2_err)
       << "," << fmt(r.n_err) << "," << fmt(r.quality) << ","
       << fmt(r.one_over_e_us) << "," << (r.extrapolated ? 1 : 0) << "\n";
  atomic_write(path, os.str());
}

void write_aggregate_json(const std::string& path, const EnsembleStats& stats,
                          const std::string& cell_id) {
  nlohmann::json j;
  j["cell"] = cell_id;
  j["n_configs"] = stats.n_configs;
  j["mean_T2_us"] = stats.mean_t2;
  j["std_T2_us"] = stats.std_t2;
  j["mean_n"] = stats.mean_n;
  j["std_n"] = stats.std_n;
  atomic_write(path, j.dump(2) + "\n");
}

void write_channels_json(const std::string& path,
                         const std::vector<LindbladChannel>& channels) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ch : channels) {
    nlohmann::json j;
    j["kind"] = to_string(ch.kind);
    j["targets"] = ch.targets[1] >= 0
                       ? nlohmann::json::array({ch.targets[0], ch.targets[1]})
                       : nlohmann::json::array({ch.targets[0]});
    if (ch.kind == ChannelKind::hop) j["spin"] = ch.hop_spin;
    j["rate_per_us"] = ch.rate_us;
    arr.push_back(j);
  }
  atomic_write(path, arr.dump(2) + "\n");
}

void write_scan_csv(const std::string& path,
                    const std::vector<DepthScanRow>& rows) {
  std::ostringstream os;
  os << "d_nv_nm,omega_signed,t2_us\n";
  for (const auto& r : rows)
    os << fmt(r.depth_nm) << "," << fmt(r.omega_signed) << "," << fmt(r.t2_us)
       << "\n";
  atomic_write(path, os.str());
}

}  // namespace spinbath
