#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evanescent/wkb.hpp"

namespace evanescent {

/// Uniform 1D grid. The two end nodes carry the Dirichlet condition
/// (psi = 0 there); eigenproblems are solved on the interior nodes.
struct Grid1D {
  double x_min_m = 0.0;
  double x_max_m = 0.0;
  int n_points = 0;

  double spacing() const { return (x_max_m - x_min_m) / (n_points - 1); }
  double x(int i) const { return x_min_m + i * spacing(); }
  void validate() const;
};

/// 1D potential landscape used by the grid solver. Built-in kinds are
/// centered at x = 0:
///   double_well        two wells of width `well_width` at zero potential,
///                      separated by a barrier of width `barrier_width` and
///                      height `barrier_height`, outer region at `well_depth`
///   rectangular_barrier one barrier of width `barrier_width` and height
///                      `barrier_height`, zero potential elsewhere
///   custom_samples     linear interpolation of explicit samples
class PotentialSpec {
 public:
  enum class Kind { double_well, rectangular_barrier, custom_samples };

  static PotentialSpec double_well(double well_width_m, double barrier_width_m,
                                   double barrier_height_j, double well_depth_j);
  static PotentialSpec rectangular_barrier(double barrier_width_m,
                                           double barrier_height_j);
  static PotentialSpec custom(std::vector<ProfileSample> samples);

  Kind kind() const { return kind_; }
  double well_width_m() const { return well_width_m_; }
  double barrier_width_m() const { return barrier_width_m_; }
  double barrier_height_j() const { return barrier_height_j_; }
  double well_depth_j() const { return well_depth_j_; }
  const std::vector<ProfileSample>& samples() const { return samples_; }

  double value_at(double x_m) const;

 private:
  explicit PotentialSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  double well_width_m_ = 0.0;
  double barrier_width_m_ = 0.0;
  double barrier_height_j_ = 0.0;
  double well_depth_j_ = 0.0;
  std::vector<ProfileSample> samples_;
};

/// Symmetric tridiagonal discretization of -hbar^2/(2m) d^2/dx^2 + V with the
/// standard three-point stencil, over the interior nodes of `grid`.
struct TridiagonalHamiltonian {
  std::vector<double> diagonal;      // hbar^2/(m h^2) + V(x_i)
  std::vector<double> off_diagonal;  // -hbar^2/(2 m h^2)
  Grid1D grid;
  double mass_kg = 0.0;
  // Set when hbar^2/(2 m h^2) < 10 max|V|: the kinetic scale no longer
  // dominates the potential at grid resolution and eigenvalues may not be
  // converged. Carried through to results, never fatal.
  bool coarse_grid_warning = false;
};

TridiagonalHamiltonian build_hamiltonian(const Grid1D& grid,
                                         const PotentialSpec& potential,
                                         double mass_kg);

/// Eigensolver failure; carries the residual that was actually achieved.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double achieved_residual)
      : std::runtime_error(message), achieved_residual_(achieved_residual) {}
  double achieved_residual() const { return achieved_residual_; }

 private:
  double achieved_residual_;
};

struct SpectrumResult {
  std::vector<double> eigenvalues_j;              // strictly ascending
  std::vector<std::vector<double>> eigenvectors;  // full grid, h sum psi^2 = 1
  Grid1D grid;
  bool coarse_grid_warning = false;
  double max_residual = 0.0;  // max ||H v - lambda v||_2 over returned pairs
};

/// k lowest eigenpairs by bisection on Sturm sequences plus inverse
/// iteration (LAPACK dstebz/dstein). Eigenvectors are reported on the full
/// grid including the zero boundary nodes.
SpectrumResult lowest_eigenpairs(const TridiagonalHamiltonian& hamiltonian, int k);

enum class SplittingFlag { ok, not_in_tunneling_regime, below_resolution };
std::string to_string(SplittingFlag flag);

struct SplittingResult {
  double e0_j = 0.0;
  double e1_j = 0.0;
  double splitting_j = 0.0;           // E1 - E0
  double barrier_top_j = 0.0;
  double binding_energy_eff_j = 0.0;  // barrier top minus the occupied level
  SplittingFlag flag = SplittingFlag::ok;
};

/// Ground-pair splitting of a mirror-symmetric double well. Flagged
/// "not_in_tunneling_regime" when E1 reaches the barrier top and
/// "below_resolution" when the splitting sinks under 1e3 x the relative
/// eigenvalue tolerance times |E0| (shrink the barrier or refine instead of
/// reading noise).
SplittingResult tunnel_splitting(const PotentialSpec& double_well,
                                 double mass_kg, const Grid1D& grid);

/// Two-level reduction of a resolved splitting: J = dE/2.
double effective_hopping(double splitting_j);

/// Grid centered on a double well with Dirichlet padding beyond the outer
/// turning points, sized in decay lengths of the outer forbidden region.
Grid1D double_well_grid(const PotentialSpec& double_well, double mass_kg,
                        int n_points, double padding_decay_lengths = 10.0);

/// Scattering outcome, kept in log domain; the linear accessors materialize
/// exp(log) and underflow to zero outside double range.
struct ScatteringResult {
  double energy_j = 0.0;
  double log_transmission = 0.0;
  double log_reflection = 0.0;

  double transmission() const;
  double reflection() const;
};

/// Closed-form transmission through one rectangular barrier, 0 < E < V0.
ScatteringResult transmission_rectangular(double energy_j, double height_j,
                                          double width_m, double mass_kg);

/// Exact transfer-matrix transmission for a piecewise-constant profile
/// (sampled profiles are staircased per sample interval). The potential is
/// zero outside the profile extent; the product is accumulated with scaled
/// matrices so arbitrarily opaque barriers stay in log domain.
ScatteringResult transmission_numeric(const BarrierProfile& profile,
                                      double energy_j);

}  // namespace evanescent
