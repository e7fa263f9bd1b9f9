#pragma once

#include <span>

namespace evanescent {

struct DecaySample {
  double separation_m;
  double log_amplitude;
};

struct FitResult {
  double decay_length_m = 0.0;  // -1/slope; +infinity when no decay detected
  double slope_per_m = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
  double residual_max = 0.0;
  bool no_decay = false;  // slope came out >= 0
};

/// Ordinary least squares on (d, ln A). Requires at least four samples with
/// distinct separations; a non-negative slope is reported as the no-decay
/// variant rather than an error.
FitResult fit_exponential(std::span<const DecaySample> samples);

}  // namespace evanescent
