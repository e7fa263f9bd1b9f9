#include "evanescent/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace evanescent {

FitResult fit_exponential(std::span<const DecaySample> samples) {
  if (samples.size() < 4) {
    throw std::invalid_argument("fit_exponential: at least 4 samples required");
  }
  std::vector<double> d_sorted;
  d_sorted.reserve(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.separation_m) || !std::isfinite(s.log_amplitude)) {
      throw std::invalid_argument("fit_exponential: samples must be finite");
    }
    d_sorted.push_back(s.separation_m);
  }
  std::sort(d_sorted.begin(), d_sorted.end());
  if (std::adjacent_find(d_sorted.begin(), d_sorted.end()) != d_sorted.end()) {
    throw std::invalid_argument("fit_exponential: separations must be distinct");
  }

  const auto n = static_cast<double>(samples.size());
  double mean_d = 0.0, mean_y = 0.0;
  for (const auto& s : samples) {
    mean_d += s.separation_m;
    mean_y += s.log_amplitude;
  }
  mean_d /= n;
  mean_y /= n;

  // Centered two-pass sums keep the slope accurate when |ln A| is huge.
  double s_dd = 0.0, s_dy = 0.0;
  for (const auto& s : samples) {
    const double dd = s.separation_m - mean_d;
    s_dd += dd * dd;
    s_dy += dd * (s.log_amplitude - mean_y);
  }
  const double slope = s_dy / s_dd;
  const double intercept = mean_y - slope * mean_d;

  double ss_res = 0.0, ss_tot = 0.0, residual_max = 0.0;
  for (const auto& s : samples) {
    const double res = s.log_amplitude - (intercept + slope * s.separation_m);
    ss_res += res * res;
    ss_tot += (s.log_amplitude - mean_y) * (s.log_amplitude - mean_y);
    residual_max = std::max(residual_max, std::abs(res));
  }

  FitResult fit;
  fit.slope_per_m = slope;
  fit.intercept = intercept;
  fit.n_points = static_cast<int>(samples.size());
  fit.residual_max = residual_max;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (slope >= 0.0) {
    fit.no_decay = true;
    fit.decay_length_m = std::numeric_limits<double>::infinity();
  } else {
    fit.decay_length_m = -1.0 / slope;
  }
  return fit;
}

}  // namespace evanescent
