#pragma once

#include <vector>

namespace evanescent {

/// One piecewise-constant stretch of potential, [start_m, end_m) at a fixed
/// value. Segments of a profile must be ordered and non-overlapping; regions
/// not covered by any segment sit at zero potential.
struct BarrierSegment {
  double start_m;
  double end_m;
  double potential_j;
};

/// One node of a sampled profile; between nodes the potential is linear.
struct ProfileSample {
  double x_m;
  double potential_j;
};

/// 1D potential landscape for a particle of fixed mass, either exact
/// piecewise-constant segments or sampled values with linear interpolation.
class BarrierProfile {
 public:
  enum class Kind { piecewise_constant, sampled };

  static BarrierProfile piecewise(std::vector<BarrierSegment> segments,
                                  double mass_kg);
  static BarrierProfile sampled(std::vector<ProfileSample> samples,
                                double mass_kg);

  Kind kind() const { return kind_; }
  double mass_kg() const { return mass_kg_; }
  const std::vector<BarrierSegment>& segments() const { return segments_; }
  const std::vector<ProfileSample>& samples() const { return samples_; }

  double x_min_m() const;
  double x_max_m() const;

 private:
  BarrierProfile(Kind kind, double mass_kg) : kind_(kind), mass_kg_(mass_kg) {}

  Kind kind_;
  double mass_kg_;
  std::vector<BarrierSegment> segments_;
  std::vector<ProfileSample> samples_;
};

/// Action integral of the local decay wavevector over the classically
/// forbidden region, plus the turning points delimiting that region.
/// Amplitude convention: log_amplitude = -action (single power); the
/// transmission probability carries twice the action. No prefactors are
/// included in either quantity.
struct WkbResult {
  double action;
  double log_amplitude;
  std::vector<double> turning_points_m;
};

/// action = integral of sqrt(2 m (V(x) - E))/hbar over {x : V(x) > E}.
/// Piecewise-constant profiles are summed in closed form; sampled profiles
/// use composite Simpson refined to 1e-8 relative on each forbidden
/// interval, with turning points located by linear interpolation and
/// inserted as breakpoints. An empty forbidden region gives action = 0.
WkbResult wkb_action(const BarrierProfile& profile, double energy_j);

/// log of the transmission probability, -2 * action.
double wkb_log_transmission(const BarrierProfile& profile, double energy_j);

}  // namespace evanescent
