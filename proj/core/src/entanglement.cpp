#include "evanescent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evanescent {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kPositivityFloor = 1e-10;
constexpr Eigen::Index kMaxTotalDimension = 1 << 14;

Eigen::Index dims_product(const std::vector<Eigen::Index>& dims) {
  Eigen::Index product = 1;
  for (Eigen::Index d : dims) product *= d;
  return product;
}

void check_dims(const std::vector<Eigen::Index>& dims, Eigen::Index size) {
  if (dims.empty()) {
    throw std::invalid_argument("tensor dims must be nonempty");
  }
  for (Eigen::Index d : dims) {
    if (d < 1) throw std::invalid_argument("tensor dims must be >= 1");
  }
  const Eigen::Index product = dims_product(dims);
  if (product != size) {
    throw std::invalid_argument("tensor dims do not match the vector length");
  }
  if (product > kMaxTotalDimension) {
    throw std::invalid_argument("total dimension exceeds the desk-scale cap");
  }
}

std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * dims[i + 1];
  }
  return strides;
}

// Flat offsets of every multi-index over the listed subsystems, using the
// original strides; kept and traced groups are disjoint so offsets add.
std::vector<Eigen::Index> group_offsets(const std::vector<Eigen::Index>& dims,
                                        const std::vector<Eigen::Index>& strides,
                                        const std::vector<int>& group) {
  Eigen::Index count = 1;
  for (int s : group) count *= dims[s];
  std::vector<Eigen::Index> offsets(count, 0);
  Eigen::Index repeat = count;
  for (int s : group) {
    repeat /= dims[s];
    for (Eigen::Index a = 0; a < count; ++a) {
      const Eigen::Index digit = (a / repeat) % dims[s];
      offsets[a] += digit * strides[s];
    }
  }
  return offsets;
}

double binary_entropy_bits(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

}  // namespace

void StateVector::validate() const {
  check_dims(dims, amplitudes.size());
  const double norm_sq = amplitudes.squaredNorm();
  if (std::abs(norm_sq - 1.0) > kNormTol) {
    throw std::invalid_argument("StateVector: norm^2 deviates from 1 by " +
                                std::to_string(std::abs(norm_sq - 1.0)));
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
  state.validate();
  DensityMatrix rho;
  rho.matrix = state.amplitudes * state.amplitudes.adjoint();
  rho.dims = state.dims;
  return rho;
}

void DensityMatrix::validate(bool check_positivity) const {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  }
  check_dims(dims, matrix.rows());
  const double asymmetry =
      (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > kHermitianTol * std::max(1.0, matrix.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("DensityMatrix: not Hermitian, max asymmetry " +
                                std::to_string(asymmetry));
  }
  const double trace_error = std::abs(matrix.trace().real() - 1.0) +
                             std::abs(matrix.trace().imag());
  if (trace_error > kNormTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace_error));
  }
  if (check_positivity) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix,
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kPositivityFloor) {
      throw std::domain_error("DensityMatrix: positivity violated, min eigenvalue " +
                              std::to_string(solver.eigenvalues().minCoeff()));
    }
  }
}

StateVector evolve(const Eigen::MatrixXcd& hamiltonian_j,
                   const StateVector& initial, double time_s) {
  initial.validate();
  if (hamiltonian_j.rows() != hamiltonian_j.cols() ||
      hamiltonian_j.rows() != initial.amplitudes.size()) {
    throw std::invalid_argument("evolve: Hamiltonian dimension mismatch");
  }
  if (!std::isfinite(time_s)) {
    throw std::invalid_argument("evolve: time must be finite");
  }
  const double asymmetry =
      (hamiltonian_j - hamiltonian_j.adjoint()).cwiseAbs().maxCoeff();
  const double scale = hamiltonian_j.cwiseAbs().maxCoeff();
  if (asymmetry > kHermitianTol * std::max(scale, 1e-300)) {
    throw std::invalid_argument("evolve: Hamiltonian not Hermitian, max asymmetry " +
                                std::to_string(asymmetry) + " J");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian_j);
  const Eigen::VectorXd& energies = solver.eigenvalues();
  const Eigen::MatrixXcd& basis = solver.eigenvectors();

  Eigen::VectorXcd coeffs = basis.adjoint() * initial.amplitudes;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double phase = -energies[i] * time_s / kCodata2018.hbar;
    coeffs[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }

  StateVector evolved;
  evolved.amplitudes = basis * coeffs;
  evolved.dims = initial.dims;
  return evolved;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  rho.validate();
  const int n_sub = static_cast<int>(rho.dims.size());
  if (keep.empty() || static_cast<int>(keep.size()) >= n_sub) {
    throw std::invalid_argument(
        "partial_trace: keep must be a nonempty proper subset of subsystems");
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_sub) {
      throw std::out_of_range("partial_trace: subsystem index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("partial_trace: keep must be strictly ascending");
    }
  }

  std::vector<int> traced;
  for (int s = 0; s < n_sub; ++s) {
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  }

  const auto strides = strides_of(rho.dims);
  const auto keep_offsets = group_offsets(rho.dims, strides, keep);
  const auto trace_offsets = group_offsets(rho.dims, strides, traced);

  DensityMatrix reduced;
  for (int s : keep) reduced.dims.push_back(rho.dims[s]);
  const auto dim_keep = static_cast<Eigen::Index>(keep_offsets.size());
  reduced.matrix = Eigen::MatrixXcd::Zero(dim_keep, dim_keep);
  for (Eigen::Index a = 0; a < dim_keep; ++a) {
    for (Eigen::Index b = 0; b < dim_keep; ++b) {
      std::complex<double> acc = 0.0;
      for (const Eigen::Index t : trace_offsets) {
        acc += rho.matrix(keep_offsets[a] + t, keep_offsets[b] + t);
      }
      reduced.matrix(a, b) = acc;
    }
  }
  return reduced;
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
  rho.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix,
                                                         Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    double lambda = solver.eigenvalues()[i];
    if (lambda < -kPositivityFloor) {
      throw std::domain_error("von_neumann_entropy: positivity violated, eigenvalue " +
                              std::to_string(lambda));
    }
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

double negativity(const DensityMatrix& rho,
                  const std::vector<int>& transpose_group) {
  rho.validate();
  const int n_sub = static_cast<int>(rho.dims.size());
  if (transpose_group.empty() ||
      static_cast<int>(transpose_group.size()) >= n_sub) {
    throw std::invalid_argument(
        "negativity: bipartition must split the subsystems into two nonempty "
        "groups");
  }
  std::vector<bool> in_group(n_sub, false);
  for (int s : transpose_group) {
    if (s < 0 || s >= n_sub) {
      throw std::out_of_range("negativity: subsystem index out of range");
    }
    in_group[s] = true;
  }

  const auto strides = strides_of(rho.dims);
  const Eigen::Index dim = rho.matrix.rows();
  Eigen::MatrixXcd transposed(dim, dim);
  std::vector<Eigen::Index> row_digits(n_sub), col_digits(n_sub);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::Index rr = r, cc = c;
      for (int s = 0; s < n_sub; ++s) {
        row_digits[s] = rr / strides[s];
        rr %= strides[s];
        col_digits[s] = cc / strides[s];
        cc %= strides[s];
      }
      Eigen::Index pr = 0, pc = 0;
      for (int s = 0; s < n_sub; ++s) {
        const Eigen::Index rd = in_group[s] ? col_digits[s] : row_digits[s];
        const Eigen::Index cd = in_group[s] ? row_digits[s] : col_digits[s];
        pr += rd * strides[s];
        pc += cd * strides[s];
      }
      transposed(pr, pc) = rho.matrix(r, c);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(transposed,
                                                         Eigen::EigenvaluesOnly);
  return 0.5 * (solver.eigenvalues().cwiseAbs().sum() - 1.0);
}

EntanglementReport mode_entanglement_demo(double hopping_j, double time_s) {
  if (hopping_j < 0.0) {
    throw std::invalid_argument("mode_entanglement_demo: hopping must be >= 0");
  }
  Eigen::MatrixXcd hopping(2, 2);
  hopping << 0.0, -hopping_j, -hopping_j, 0.0;

  StateVector start;
  start.amplitudes = Eigen::VectorXcd::Zero(2);
  start.amplitudes[0] = 1.0;  // particle in body A
  start.dims = {2};
  const StateVector moved = evolve(hopping, start, time_s);
  const double p = std::norm(moved.amplitudes[1]);

  // Dual-rail rendering of the spatial cut: |A> -> |1>_A|0>_B, |B> -> |0>_A|1>_B.
  StateVector dual_rail;
  dual_rail.amplitudes = Eigen::VectorXcd::Zero(4);
  dual_rail.amplitudes[2] = moved.amplitudes[0];
  dual_rail.amplitudes[1] = moved.amplitudes[1];
  dual_rail.dims = {2, 2};
  const DensityMatrix rho = DensityMatrix::from_pure(dual_rail);

  EntanglementReport report;
  report.transfer_probability = p;
  report.entropy_bits = von_neumann_entropy_bits(partial_trace(rho, {0}));
  report.negativity = negativity(rho, {1});
  report.bipartition = "body-A mode | body-B mode";
  return report;
}

EntanglementReport spectator_transfer_demo(double hopping_j, double time_s) {
  if (hopping_j < 0.0) {
    throw std::invalid_argument("spectator_transfer_demo: hopping must be >= 0");
  }
  // dims: spectator qubit (fixed in A) x mobile internal qubit x position A/B.
  constexpr Eigen::Index kDim = 8;
  Eigen::MatrixXcd hamiltonian = Eigen::MatrixXcd::Zero(kDim, kDim);
  for (Eigen::Index s = 0; s < 2; ++s) {
    for (Eigen::Index i = 0; i < 2; ++i) {
      const Eigen::Index at_a = (s * 2 + i) * 2;
      hamiltonian(at_a, at_a + 1) = -hopping_j;
      hamiltonian(at_a + 1, at_a) = -hopping_j;
    }
  }

  StateVector start;
  start.amplitudes = Eigen::VectorXcd::Zero(kDim);
  start.amplitudes[0] = 1.0 / std::sqrt(2.0);  // |0 0 A>
  start.amplitudes[6] = 1.0 / std::sqrt(2.0);  // |1 1 A>
  start.dims = {2, 2, 2};
  const StateVector moved = evolve(hamiltonian, start, time_s);

  double p_b = 0.0;
  for (Eigen::Index idx = 1; idx < kDim; idx += 2) {
    p_b += std::norm(moved.amplitudes[idx]);
  }

  EntanglementReport report;
  report.transfer_probability = p_b;
  report.bipartition = "body A (spectator) | body B (mobile contents)";
  // Project onto particle-location sectors. In the A sector body B holds
  // nothing, so only the B sector contributes across the body cut.
  if (p_b > 1e-300) {
    StateVector sector_b;
    sector_b.amplitudes = Eigen::VectorXcd::Zero(4);
    for (Eigen::Index s = 0; s < 2; ++s) {
      for (Eigen::Index i = 0; i < 2; ++i) {
        sector_b.amplitudes[s * 2 + i] =
            moved.amplitudes[(s * 2 + i) * 2 + 1] / std::sqrt(p_b);
      }
    }
    sector_b.dims = {2, 2};
    const DensityMatrix rho_b = DensityMatrix::from_pure(sector_b);
    report.negativity = p_b * negativity(rho_b, {1});
    report.entropy_bits =
        p_b * von_neumann_entropy_bits(partial_trace(rho_b, {0}));
  }
  return report;
}

RateSweep rate_vs_separation(const ScaleParams& base, double hopping_scale_j,
                             std::span<const double> separations_m,
                             double probe_phase) {
  base.validate();
  if (!(base.binding_energy_j > 0.0)) {
    throw std::invalid_argument("rate_vs_separation: requires E_b > 0");
  }
  if (!(hopping_scale_j > 0.0)) {
    throw std::invalid_argument("rate_vs_separation: hopping scale must be > 0");
  }
  if (!(probe_phase > 0.0) || probe_phase > 1e-3) {
    throw std::invalid_argument(
        "rate_vs_separation: probe phase must lie in (0, 1e-3]");
  }
  if (separations_m.size() < 4) {
    throw std::invalid_argument(
        "rate_vs_separation: at least 4 separations required for the fit");
  }
  double d_min = separations_m[0];
  for (double d : separations_m) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw std::invalid_argument("rate_vs_separation: separations must be >= 0");
    }
    d_min = std::min(d_min, d);
  }

  const double ell = suppression_length(base);
  const double log_j0 = std::log(hopping_scale_j);
  const double log_theta0 = std::log(probe_phase);

  RateSweep sweep;
  sweep.suppression_length_m = ell;
  sweep.expected_decay_length_m = 0.5 * ell;
  sweep.points.reserve(separations_m.size());
  std::vector<DecaySample> fit_samples;
  fit_samples.reserve(separations_m.size());

  for (double d : separations_m) {
    RatePoint point;
    point.separation_m = d;
    point.log_hopping = log_j0 - d / ell;
    // theta(d) = theta0 e^{-(d - d_min)/ell}; ln p = ln sin^2(theta) expanded
    // around the log so arbitrarily suppressed points never underflow.
    const double log_theta = log_theta0 - (d - d_min) / ell;
    const double theta = std::exp(log_theta);
    const double t2 = theta * theta;
    const double log_sinc = std::log1p(-t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0)));
    point.log_transfer_probability = 2.0 * (log_theta + log_sinc);

    const double p = std::exp(point.log_transfer_probability);
    point.entropy_bits = binary_entropy_bits(std::clamp(p, 0.0, 1.0));
    point.negativity =
        std::exp(0.5 * point.log_transfer_probability + 0.5 * std::log1p(-std::min(p, 1.0)));
    sweep.points.push_back(point);
    fit_samples.push_back({d, point.log_transfer_probability});
  }

  sweep.fit = fit_exponential(fit_samples);
  return sweep;
}

}  // namespace evanescent
