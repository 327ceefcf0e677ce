#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "nrbridge/model.hpp"

namespace nrbridge {

using MatrixC = Eigen::MatrixXcd;
using VectorD = Eigen::VectorXd;

enum class ModeKind { kFermion, kBoson };

struct Mode {
  ModeKind kind = ModeKind::kFermion;
  int cutoff = 1;  // highest Fock number kept; always 1 for fermions

  int dimension() const { return cutoff + 1; }
  static Mode fermion() { return {ModeKind::kFermion, 1}; }
  static Mode boson(int cutoff) { return {ModeKind::kBoson, cutoff}; }
};

/// Tensor product of fermionic and truncated bosonic modes. The first mode
/// is the most significant index of the product basis. Fermionic
/// annihilators carry a Jordan-Wigner parity string over all earlier
/// fermionic modes, so operators on distinct fermionic modes anticommute.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<Mode> modes);

  const std::vector<Mode>& modes() const { return modes_; }
  Eigen::Index dimension() const { return dimension_; }

  MatrixC annihilator(std::size_t mode) const;
  MatrixC creator(std::size_t mode) const { return annihilator(mode).adjoint(); }
  MatrixC number(std::size_t mode) const;
  MatrixC identity() const { return MatrixC::Identity(dimension_, dimension_); }
  /// Sum of number operators over all fermionic modes.
  MatrixC fermion_number() const;
  /// |n_0 n_1 ...><n_0 n_1 ...| for the given occupation numbers.
  MatrixC projector(const std::vector<int>& occupations) const;

 private:
  std::vector<Mode> modes_;
  Eigen::Index dimension_ = 1;
};

/// Density matrix with its physical invariants checked on demand.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(MatrixC rho) : rho_(std::move(rho)) {}

  const MatrixC& matrix() const { return rho_; }
  MatrixC& matrix() { return rho_; }
  Eigen::Index dimension() const { return rho_.rows(); }

  cplx trace() const { return rho_.trace(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  /// Throws DomainError when hermiticity, trace, or positivity fails.
  void check(double trace_tol = 1e-10, double eig_tol = 1e-10) const;

  /// (rho + rho^+) / 2 with unit trace.
  void sanitize();

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix basis_state(Eigen::Index dimension, Eigen::Index index);

 private:
  MatrixC rho_;
};

struct JumpChannel {
  MatrixC op;
  double rate = 0.0;
};

/// -i[H, rho] + sum_m rate_m (L rho L^+ - {L^+ L, rho} / 2).
MatrixC liouvillian_apply(const MatrixC& h, const std::vector<JumpChannel>& channels,
                          const MatrixC& rho);

/// Step size 0.02 / (spectral scale) used when the caller passes dt <= 0.
double suggested_step(const MatrixC& h, const std::vector<JumpChannel>& channels);

using TrajectoryObserver = std::function<void(double t, const DensityMatrix& rho)>;

/// Fixed-step RK4; rho is re-Hermitized and renormalized after every step.
/// The observer, if set, sees the initial state and every completed step.
DensityMatrix evolve(const DensityMatrix& rho0, const MatrixC& h,
                     const std::vector<JumpChannel>& channels, double t_final, double dt,
                     const TrajectoryObserver& observer = {});

struct SteadyStateOptions {
  Eigen::Index dense_limit = 64;  // largest D for the dense null-space solve
  double rank_tolerance = 1e-9;   // relative threshold for the kernel dimension
};

/// Kernel of the Liouvillian normalized to unit trace: dense rank-revealing
/// solve for D <= dense_limit, sparse LU above.
DensityMatrix steady_state(const MatrixC& h, const std::vector<JumpChannel>& channels,
                           const SteadyStateOptions& options = {});

struct RelaxationResult {
  DensityMatrix rho;
  double time = 0.0;
  double residual = 0.0;  // trace norm of d rho / dt at the end
};

/// Evolves with doubling horizons until ||d rho/dt||_1 < tol.
RelaxationResult relax_to_steady_state(const DensityMatrix& rho0, const MatrixC& h,
                                       const std::vector<JumpChannel>& channels,
                                       double tol = 1e-10, double t_max = 1e6);

cplx expectation(const MatrixC& op, const DensityMatrix& rho);

/// |Tr(O L[rho]) - Tr(O (-i)[H, rho])| for O commuting with every L and L^+.
/// Throws PreconditionError with the offending commutator norm otherwise.
double commutant_drift_check(const MatrixC& op, const MatrixC& h,
                             const std::vector<JumpChannel>& channels, const DensityMatrix& rho,
                             double commutator_tol = 1e-12);

/// H - i (rate / 2) L^+ L.
MatrixC effective_hamiltonian(const MatrixC& h, const JumpChannel& channel);

/// Largest |i d<L>/dt - Tr(L [H_eff, rho])| along the trajectory, with
/// d<L>/dt taken from the full generator including every channel.
/// `channel_index` selects L; it must commute (with its adjoint) with all
/// other channel operators.
double leap_expectation_check(std::size_t channel_index, const MatrixC& h,
                              const std::vector<JumpChannel>& channels,
                              const std::vector<DensityMatrix>& trajectory,
                              double commutator_tol = 1e-12);

/// Steady-state correlations C_ij = <c_i^+ c_j> of a quadratic fermionic
/// Lindbladian with single-mode loss (c_j) and gain (c_j^+) channels.
MatrixC quadratic_steady_state(const MatrixC& h, const VectorD& loss_rates,
                               const VectorD& gain_rates);

}  // namespace nrbridge
