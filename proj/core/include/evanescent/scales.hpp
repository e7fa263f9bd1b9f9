#pragma once

#include <optional>

#include "evanescent/constants.hpp"

namespace evanescent {

/// Physical inputs for the closed-form suppression estimates, SI units.
///
/// `binding_energy_j` is the virtual energy a bound constituent needs to
/// leave its localized region; zero binding describes a free constituent
/// and maps to "no suppression" rather than an error.
struct ScaleParams {
  double mass_kg = 0.0;
  double binding_energy_j = 0.0;
  double separation_m = 0.0;

  /// Convenience constructor taking the binding energy in eV.
  static ScaleParams with_binding_ev(double mass_kg, double binding_ev,
                                     double separation_m);

  /// Throws std::domain_error unless mass > 0, binding >= 0, separation >= 0.
  void validate() const;
};

/// Evanescent wavevector, its reciprocal decay length and the log amplitude
/// for one parameter set. kappa * ell == 1 by construction (kappa > 0).
struct SuppressionEstimate {
  double kappa_per_m;
  double ell_m;
  double log_amplitude;
};

/// kappa = sqrt(2 m E_b) / hbar. Zero when the binding energy is zero.
double evanescent_wavevector(const ScaleParams& params);

/// ell = hbar / sqrt(2 m E_b) = 1/kappa. Returns +infinity when E_b == 0,
/// signalling "no suppression" as a distinct non-finite outcome.
double suppression_length(const ScaleParams& params);

/// ln A = -d/ell. Kept in log domain: the linear amplitude underflows any
/// floating format once d/ell exceeds a few hundred.
double log_suppression(const ScaleParams& params);

/// m' = m + E_b/c^2, the effective propagator mass of a bound constituent.
double shifted_mass(const ScaleParams& params);

/// mu = sqrt(m'^2 - m^2) c / hbar = kappa sqrt(1 + E_b/(2 m c^2)).
/// Reduces to kappa for E_b << m c^2 and vanishes with the binding energy.
double relativistic_decay_rate(const ScaleParams& params);

SuppressionEstimate suppression_estimate(const ScaleParams& params);

/// Materializes exp(log_amplitude) only while representable; log magnitudes
/// of 700 and above stay in log domain (nullopt).
std::optional<double> materialize_amplitude(double log_amplitude);

}  // namespace evanescent
