#pragma once

#include "spinbath/cce.hpp"

#include <vector>

namespace spinbath {

// Stretched-exponential fit |L(t)| = exp(-(t/T2)^n).
struct FitResult {
  double t2_us = 0.0;
  double n = 0.0;
  double t2_err = 0.0;
  double n_err = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // (ln T2, n)
  double quality = 0.0;       // rms residual in log-log space
  double t_window_lo = 0.0;
  double t_window_hi = 0.0;
  double one_over_e_us = 0.0;  // interpolated 1/e crossing
  bool extrapolated = false;   // curve never decays below 1/e
};

struct FitOptions {
  double n_min = 0.2;
  double n_max = 6.0;
  double floor = 1e-3;   // points with |L| below this are excluded
  double ceiling = 0.98; // points with |L| above this are excluded
};

// Least-squares fit on log-transformed data: ln(-ln|L|) is linear in ln t
// for a stretched exponential. Throws NumericError when the curve never
// decays below 0.9 within the grid.
FitResult fit_stretched(const CoherenceCurve& curve,
                        const FitOptions& opt = {});
FitResult fit_stretched(const std::vector<double>& times_us,
                        const std::vector<double>& magnitudes,
                        const FitOptions& opt = {});

// Instantaneous log-log exponent n_inst(t) = d ln(-ln|L|) / d ln t via a
// five-point local quadratic on smoothed data. Degenerate (flat) curves
// return an empty sequence.
struct InstantaneousExponent {
  std::vector<double> times_us;
  std::vector<double> n_inst;
  bool degenerate = false;
};

InstantaneousExponent instantaneous_exponent(const CoherenceCurve& curve,
                                             int window = 5);

struct EnsembleStats {
  double mean_t2 = 0.0;
  double std_t2 = 0.0;
  double mean_n = 0.0;
  double std_n = 0.0;
  int n_configs = 0;
  std::vector<FitResult> per_config;
};

EnsembleStats aggregate(const std::vector<FitResult>& results);

// Pointwise complex mean of curves sharing a time grid.
CoherenceCurve mean_curve(const std::vector<CoherenceCurve>& curves);

// Interpolated 1/e crossing; returns t_max when the curve never crosses.
double one_over_e_crossing(const std::vector<double>& times_us,
                           const std::vector<double>& magnitudes);

}  // namespace spinbath
