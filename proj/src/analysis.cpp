#include "spinbath/analysis.hpp"

#include "spinbath/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spinbath {

double one_over_e_crossing(const std::vector<double>& times_us,
                           const std::vector<double>& magnitudes) {
  const double target = std::exp(-1.0);
  for (std::size_t k = 1; k < times_us.size(); ++k) {
    if (magnitudes[k] <= target && magnitudes[k - 1] > target) {
      // interpolate in (log t, log(-log L)) only if both points decay
      const double x0 = times_us[k - 1], x1 = times_us[k];
      const double y0 = magnitudes[k - 1], y1 = magnitudes[k];
      if (y1 <= 0.0 || y0 >= 1.0) return x1;
      const double f = (target - y0) / (y1 - y0);
      return x0 + f * (x1 - x0);
    }
  }
  return times_us.empty() ? 0.0 : times_us.back();
}

FitResult fit_stretched(const std::vector<double>& times_us,
                        const std::vector<double>& magnitudes,
                        const FitOptions& opt) {
  if (times_us.size() != magnitudes.size() || times_us.size() < 3)
    throw ConfigError("fit_stretched: malformed curve");

  double min_mag = 1.0;
  for (double m : magnitudes) min_mag = std::min(min_mag, m);
  if (min_mag > 0.9)
    throw NumericError(
        "fit_stretched: no decay below 0.9 within the grid; extend t_max");

  // masked points in log-log space
  std::vector<double> x, y;
  for (std::size_t k = 0; k < times_us.size(); ++k) {
    const double t = times_us[k];
    const double m = magnitudes[k];
    if (t <= 0.0 || m < opt.floor || m > opt.ceiling) continue;
    x.push_back(std::log(t));
    y.push_back(std::log(-std::log(m)));
  }
  FitResult fit;
  fit.extrapolated = min_mag > std::exp(-1.0);
  fit.one_over_e_us = one_over_e_crossing(times_us, magnitudes);
  if (x.size() < 8 && !fit.extrapolated)
    throw NumericError("fit_stretched: fewer than 8 usable points");
  if (x.size() < 2)
    throw NumericError("fit_stretched: not enough decaying points");

  // linear regression y = n x - n ln T2
  const std::size_t n_pts = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n_pts; ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double denom = n_pts * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw NumericError("fit_stretched: degenerate time window");
  double slope = (n_pts * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n_pts;

  slope = std::clamp(slope, opt.n_min, opt.n_max);
  fit.n = slope;
  fit.t2_us = std::exp(-intercept / slope);
  fit.t_window_lo = std::exp(x.front());
  fit.t_window_hi = std::exp(x.back());

  // residuals and standard errors of the regression
  double ss = 0;
  for (std::size_t k = 0; k < n_pts; ++k) {
    const double r = y[k] - (slope * x[k] + intercept);
    ss += r * r;
  }
  fit.quality = std::sqrt(ss / n_pts);
  if (n_pts > 2) {
    const double s2 = ss / (n_pts - 2);
    const double var_slope = s2 * n_pts / denom;
    const double var_intercept = s2 * sxx / denom;
    const double cov_si = -s2 * sx / denom;
    fit.n_err = std::sqrt(var_slope);
    // T2 = exp(-b/a): error propagation on (a=slope, b=intercept)
    const double dt_da = fit.t2_us * intercept / (slope * slope);
    const double dt_db = -fit.t2_us / slope;
    fit.t2_err = std::sqrt(std::max(
        0.0, dt_da * dt_da * var_slope + dt_db * dt_db * var_intercept +
                 2.0 * dt_da * dt_db * cov_si));
    fit.covariance << var_intercept, cov_si, cov_si, var_slope;
  }
  return fit;
}

FitResult fit_stretched(const CoherenceCurve& curve, const FitOptions& opt) {
  return fit_stretched(curve.times_us, curve.magnitudes(), opt);
}

InstantaneousExponent instantaneous_exponent(const CoherenceCurve& curve,
                                             int window) {
  InstantaneousExponent out;
  std::vector<double> x, z;
  const std::vector<double> mag = curve.magnitudes();
  for (std::size_t k = 0; k < curve.times_us.size(); ++k) {
    const double t = curve.times_us[k];
    const double m = mag[k];
    if (t <= 0.0 || m <= 1e-3 || m >= 0.9999) continue;
    x.push_back(std::log(t));
    z.push_back(std::log(-std::log(m)));
  }
  if (x.size() < static_cast<std::size_t>(window)) {
    out.degenerate = true;
    return out;
  }
  const int half = window / 2;
  for (std::size_t c = half; c + half < x.size(); ++c) {
    // local quadratic fit z ~ a + b (x-xc) + d (x-xc)^2; slope at center = b
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (int w = -half; w <= half; ++w) {
      const double dx = x[c + w] - x[c];
      const double zz = z[c + w];
      s0 += 1;
      s1 += dx;
      s2 += dx * dx;
      s3 += dx * dx * dx;
      s4 += dx * dx * dx * dx;
      t0 += zz;
      t1 += zz * dx;
      t2 += zz * dx * dx;
    }
    // solve the 3x3 normal equations
    Eigen::Matrix3d a;
    a << s0, s1, s2, s1, s2, s3, s2, s3, s4;
    Eigen::Vector3d rhs(t0, t1, t2);
    const Eigen::Vector3d coef = a.fullPivLu().solve(rhs);
    out.times_us.push_back(std::exp(x[c]));
    out.n_inst.push_back(coef(1));
  }
  if (out.times_us.empty()) out.degenerate = true;
  return out;
}

EnsembleStats aggregate(const std::vector<FitResult>& results) {
  if (results.empty()) throw ConfigError("aggregate: no fit results");
  EnsembleStats s;
  s.n_configs = static_cast<int>(results.size());
  s.per_config = results;
  for (const FitResult& r : results) {
    s.mean_t2 += r.t2_us;
    s.mean_n += r.n;
  }
  s.mean_t2 /= s.n_configs;
  s.mean_n /= s.n_configs;
  if (s.n_configs > 1) {
    double vt = 0, vn = 0;
    for (const FitResult& r : results) {
      vt += (r.t2_us - s.mean_t2) * (r.t2_us - s.mean_t2);
      vn += (r.n - s.mean_n) * (r.n - s.mean_n);
    }
    s.std_t2 = std::sqrt(vt / (s.n_configs - 1));
    s.std_n = std::sqrt(vn / (s.n_configs - 1));
  }
  return s;
}

CoherenceCurve mean_curve(const std::vector<CoherenceCurve>& curves) {
  if (curves.empty()) throw ConfigError("mean_curve: no curves");
  CoherenceCurve out = curves.front();
  for (std::size_t c = 1; c < curves.size(); ++c) {
    if (curves[c].times_us != out.times_us)
      throw ConfigError("mean_curve: mismatched time grids");
    for (std::size_t k = 0; k < out.values.size(); ++k)
      out.values[k] += curves[c].values[k];
  }
  const double inv = 1.0 / curves.size();
  for (cxd& v : out.values) v *= inv;
  out.method = curves.front().method + "-mean";
  return out;
}

}  // namespace spinbath
