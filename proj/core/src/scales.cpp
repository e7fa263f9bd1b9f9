#include "evanescent/scales.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evanescent {

ScaleParams ScaleParams::with_binding_ev(double mass_kg, double binding_ev,
                                         double separation_m) {
  ScaleParams params{mass_kg, ev_to_joule(binding_ev), separation_m};
  params.validate();
  return params;
}

void ScaleParams::validate() const {
  if (!(mass_kg > 0.0) || !std::isfinite(mass_kg)) {
    throw std::domain_error("ScaleParams: mass must be positive and finite, got " +
                            std::to_string(mass_kg));
  }
  if (!(binding_energy_j >= 0.0) || !std::isfinite(binding_energy_j)) {
    throw std::domain_error("ScaleParams: binding energy must be >= 0, got " +
                            std::to_string(binding_energy_j));
  }
  if (!(separation_m >= 0.0) || !std::isfinite(separation_m)) {
    throw std::domain_error("ScaleParams: separation must be >= 0, got " +
                            std::to_string(separation_m));
  }
}

double evanescent_wavevector(const ScaleParams& params) {
  params.validate();
  return std::sqrt(2.0 * params.mass_kg * params.binding_energy_j) /
         kCodata2018.hbar;
}

double suppression_length(const ScaleParams& params) {
  params.validate();
  if (params.binding_energy_j == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return kCodata2018.hbar /
         std::sqrt(2.0 * params.mass_kg * params.binding_energy_j);
}

double log_suppression(const ScaleParams& params) {
  // -d * kappa, evaluated directly so no intermediate overflows for any d.
  const double kappa = evanescent_wavevector(params);
  const double value = -params.separation_m * kappa;
  return value == 0.0 ? 0.0 : value;  // normalize -0
}

double shifted_mass(const ScaleParams& params) {
  params.validate();
  return params.mass_kg +
         params.binding_energy_j / (kCodata2018.c * kCodata2018.c);
}

double relativistic_decay_rate(const ScaleParams& params) {
  params.validate();
  // m'^2 - m^2 = (E_b/c^2)(2m + E_b/c^2): a sum of positives, no cancellation.
  const double c = kCodata2018.c;
  const double delta = params.binding_energy_j / (c * c);
  const double mass_sq_excess = delta * (2.0 * params.mass_kg + delta);
  return std::sqrt(mass_sq_excess) * c / kCodata2018.hbar;
}

SuppressionEstimate suppression_estimate(const ScaleParams& params) {
  return SuppressionEstimate{
      evanescent_wavevector(params),
      suppression_length(params),
      log_suppression(params),
  };
}

std::optional<double> materialize_amplitude(double log_amplitude) {
  if (std::abs(log_amplitude) >= 700.0) {
    return std::nullopt;
  }
  return std::exp(log_amplitude);
}

}  // namespace evanescent
