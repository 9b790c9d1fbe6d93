#pragma once

#include "spinbath/analysis.hpp"
#include "spinbath/cce.hpp"
#include "spinbath/master_equation.hpp"
#include "spinbath/pseudospin.hpp"

#include <string>
#include <vector>

namespace spinbath {

// Curve CSV: header then rows `t_us,re_L,im_L` with fixed %.12g formatting.
void write_curve_csv(const std::string& path, const CoherenceCurve& curve);
CoherenceCurve read_curve_csv(const std::string& path);

// JSON metadata sidecar for a curve file.
void write_curve_sidecar(const std::string& path, const CoherenceCurve& curve,
                         const std::string& config_hash);

// Fit report CSV: `config_id,T2_us,n,T2_err,n_err,quality`.
void write_fits_csv(const std::string& path,
                    const std::vector<std::pair<std::string, FitResult>>& rows);

// Aggregate ensemble statistics as JSON.
void write_aggregate_json(const std::string& path, const EnsembleStats& stats,
                          const std::string& cell_id);

// Channel dump for reproducibility audits.
void write_channels_json(const std::string& path,
                         const std::vector<LindbladChannel>& channels);

// Pseudo-spin scan CSV: `d_nv_nm,omega_signed,t2_us`.
void write_scan_csv(const std::string& path,
                    const std::vector<DepthScanRow>& rows);

bool file_exists(const std::string& path);
void ensure_directory(const std::string& path);
void atomic_write(const std::string& path, const std::string& content);

}  // namespace spinbath
