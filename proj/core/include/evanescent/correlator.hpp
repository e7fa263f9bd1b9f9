#pragma once

#include <stdexcept>
#include <string>

#include "evanescent/scales.hpp"

namespace evanescent {

/// Inputs to the static matter correlator with a binding-shifted pole.
struct PropagatorParams {
  double mass_kg = 0.0;
  double binding_energy_j = 0.0;
  int spatial_dimension = 1;  // 1 or 3

  void validate() const;
};

enum class CorrelatorMethod { analytic, quadrature };

struct CorrelatorSample {
  double separation_m = 0.0;
  double log_value = 0.0;
  CorrelatorMethod method = CorrelatorMethod::analytic;
  // For quadrature samples: achieved log-domain error estimate, at most the
  // requested tolerance. Zero for analytic samples.
  double error_estimate = 0.0;
  // 3D samples carry the reference scale of the 1/d prefactor, ln(d/d0).
  double reference_scale_m = 1.0;
};

/// Pole of the bound-matter propagator: k0 = m' c / hbar with m' = m + E_b/c^2.
double pole_location(const PropagatorParams& params);

/// Log of the static correlator at distance d. In 1D this is -mu d; in 3D
/// the Yukawa prefactor adds -ln(d/d0) with d0 = 1 m recorded in the sample.
/// mu is the decay rate of the shifted pole (relativistic_decay_rate).
CorrelatorSample static_correlator_log(const PropagatorParams& params,
                                       double separation_m);

/// Quadrature refinement ran out of iterations; carries the last two
/// iterates so the caller can see where it stalled.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& message, double last, double previous)
      : std::runtime_error(message), last_(last), previous_(previous) {}
  double last_iterate() const { return last_; }
  double previous_iterate() const { return previous_; }

 private:
  double last_;
  double previous_;
};

struct QuadratureDetail {
  CorrelatorSample sample;
  double imag_over_real = 0.0;  // evenness residual of the truncated integral
  double k_max = 0.0;           // final truncation
  int refinements = 0;
};

/// Direct numerical evaluation of the momentum integral
///   integral over [-K, K] of e^{ikd} / (k^2 + mu^2) dk
/// by composite Gauss-Kronrod panels, with K a half-period multiple of the
/// oscillation (starting at max(50 mu, 20/d)) and doubled until the result
/// is stable to `tolerance` in relative terms. Independent check of the
/// analytic result (pi/mu) e^{-mu d}. Requires mu d <= 30 so the linear
/// value stays representable; mu = 0 has no normalizable integrand and is
/// rejected.
QuadratureDetail correlator_quadrature_detailed(const PropagatorParams& params,
                                                double separation_m,
                                                double tolerance);
CorrelatorSample correlator_quadrature(const PropagatorParams& params,
                                       double separation_m, double tolerance);

struct NonrelConsistency {
  double relative_excess = 0.0;  // (mu - kappa)/kappa, evaluated stably
  double first_order = 0.0;      // E_b / (4 m c^2)
  bool nonrelativistic_regime = true;  // E_b < 1e-2 m c^2
};

/// How far the relativistic decay rate sits above the evanescent wavevector,
/// against its leading-order prediction. Flags leaving the regime where the
/// first-order comparison is meaningful.
NonrelConsistency nonrel_consistency(const PropagatorParams& params);

}  // namespace evanescent
