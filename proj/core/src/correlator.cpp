#include "evanescent/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace evanescent {
namespace {

// 15-point Gauss-Kronrod rule on [-1, 1] (7-point Gauss embedded).
constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
};
constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
};

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

template <typename F>
double gk15_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = kGk15Weights[7] * f(mid);
  for (int j = 0; j < 7; ++j) {
    acc += kGk15Weights[j] *
           (f(mid - half * kGk15Nodes[j]) + f(mid + half * kGk15Nodes[j]));
  }
  return acc * half;
}

// Composite rule over [-K, K] with panels no wider than a quarter of the
// oscillation period and no wider than half the Lorentzian width.
template <typename F>
double composite_gk15(const F& f, double k_max, double mu, double d) {
  const double width = std::min(std::numbers::pi / (2.0 * d), 0.5 * mu);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * k_max / width));
  const double h = 2.0 * k_max / static_cast<double>(panels);
  KahanSum total;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = -k_max + static_cast<double>(i) * h;
    total.add(gk15_panel(f, a, a + h));
  }
  return total.sum;
}

ScaleParams to_scale_params(const PropagatorParams& params, double separation_m) {
  return ScaleParams{params.mass_kg, params.binding_energy_j, separation_m};
}

}  // namespace

void PropagatorParams::validate() const {
  ScaleParams{mass_kg, binding_energy_j, 0.0}.validate();
  if (spatial_dimension != 1 && spatial_dimension != 3) {
    throw std::invalid_argument(
        "PropagatorParams: spatial dimension must be 1 or 3");
  }
}

double pole_location(const PropagatorParams& params) {
  params.validate();
  return shifted_mass(to_scale_params(params, 0.0)) * kCodata2018.c /
         kCodata2018.hbar;
}

CorrelatorSample static_correlator_log(const PropagatorParams& params,
                                       double separation_m) {
  params.validate();
  if (params.spatial_dimension == 3 && !(separation_m > 0.0)) {
    throw std::invalid_argument(
        "static_correlator_log: the 3D correlator is singular at zero "
        "separation");
  }
  if (separation_m < 0.0) {
    throw std::invalid_argument("static_correlator_log: separation must be >= 0");
  }

  const double mu = relativistic_decay_rate(to_scale_params(params, separation_m));
  CorrelatorSample sample;
  sample.separation_m = separation_m;
  sample.method = CorrelatorMethod::analytic;
  double log_value = -mu * separation_m;
  if (params.spatial_dimension == 3) {
    log_value -= std::log(separation_m / sample.reference_scale_m);
  }
  sample.log_value = log_value == 0.0 ? 0.0 : log_value;
  return sample;
}

QuadratureDetail correlator_quadrature_detailed(const PropagatorParams& params,
                                                double separation_m,
                                                double tolerance) {
  params.validate();
  if (!(separation_m > 0.0)) {
    throw std::invalid_argument("correlator_quadrature: separation must be > 0");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("correlator_quadrature: tolerance must be > 0");
  }
  const double mu = relativistic_decay_rate(to_scale_params(params, separation_m));
  if (mu == 0.0) {
    throw std::invalid_argument(
        "correlator_quadrature: zero binding gives a non-normalizable "
        "integrand (no pole shift)");
  }
  const double mu_d = mu * separation_m;
  if (mu_d > 30.0) {
    throw std::invalid_argument(
        "correlator_quadrature: mu*d must be <= 30 for a representable "
        "linear value, got " + std::to_string(mu_d));
  }

  const double d = separation_m;
  auto real_part = [mu, d](double k) { return std::cos(k * d) / (k * k + mu * mu); };
  auto imag_part = [mu, d](double k) { return std::sin(k * d) / (k * k + mu * mu); };

  // Truncation snapped to half-period multiples of the oscillation: the
  // leading boundary term of the tail then cancels and the truncation error
  // falls like 1/(d K)^3 instead of the crude 2/K bound, which is what the
  // tolerance actually requires at large mu d.
  const double half_period = std::numbers::pi / d;
  const double k_floor = std::max(50.0 * mu, 20.0 / d);
  double k_max = std::ceil(k_floor / half_period) * half_period;

  constexpr int kMaxRefinements = 14;
  double previous = 0.0;
  bool have_previous = false;
  for (int round = 0; round < kMaxRefinements; ++round) {
    const double value = composite_gk15(real_part, k_max, mu, d);
    if (have_previous &&
        std::abs(value - previous) <= 0.25 * tolerance * std::abs(value)) {
      QuadratureDetail detail;
      detail.sample.separation_m = separation_m;
      detail.sample.method = CorrelatorMethod::quadrature;
      detail.sample.log_value = std::log(value);
      detail.sample.error_estimate =
          std::abs(value - previous) / std::abs(value) * 4.0;
      detail.imag_over_real =
          std::abs(composite_gk15(imag_part, k_max, mu, d)) / std::abs(value);
      detail.k_max = k_max;
      detail.refinements = round;
      return detail;
    }
    previous = value;
    have_previous = true;
    k_max *= 2.0;
  }
  throw QuadratureError(
      "correlator_quadrature: no convergence to tolerance " +
          std::to_string(tolerance) + " after " +
          std::to_string(kMaxRefinements) + " refinements",
      composite_gk15(real_part, k_max, mu, d), previous);
}

CorrelatorSample correlator_quadrature(const PropagatorParams& params,
                                       double separation_m, double tolerance) {
  return correlator_quadrature_detailed(params, separation_m, tolerance).sample;
}

NonrelConsistency nonrel_consistency(const PropagatorParams& params) {
  params.validate();
  if (!(params.binding_energy_j > 0.0)) {
    throw std::invalid_argument("nonrel_consistency: requires E_b > 0");
  }
  const double mc2 = params.mass_kg * kCodata2018.c * kCodata2018.c;
  const double u = params.binding_energy_j / (2.0 * mc2);
  NonrelConsistency result;
  // (mu - kappa)/kappa = sqrt(1+u) - 1 = u / (1 + sqrt(1+u)): no cancellation.
  result.relative_excess = u / (1.0 + std::sqrt(1.0 + u));
  result.first_order = 0.5 * u;
  result.nonrelativistic_regime = params.binding_energy_j < 1e-2 * mc2;
  return result;
}

}  // namespace evanescent
