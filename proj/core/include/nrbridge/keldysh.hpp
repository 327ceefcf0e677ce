#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "nrbridge/model.hpp"
#include "nrbridge/quadrature.hpp"

namespace nrbridge {

using Matrix3c = Eigen::Matrix3cd;

enum class Site { kG = 0, kE = 1, k5 = 2 };
enum class LeadSide { kLeft, kRight };

/// Retarded and Keldysh components of a (diagonal) self-energy at one
/// frequency. The advanced part is the conjugate of the retarded one.
struct SelfEnergy {
  cplx retarded{0.0, 0.0};
  cplx keldysh{0.0, 0.0};

  cplx advanced() const { return std::conj(retarded); }
  /// Sigma^< = (Sigma^K - Sigma^R + Sigma^A) / 2.
  cplx lesser() const { return 0.5 * (keldysh - retarded + advanced()); }
};

/// Wide-band Gibbs lead: Sigma^R = -i Gamma,
/// Sigma^K = -2 i Gamma tanh((w - mu) / 2T), sign(w - mu) at T = 0.
SelfEnergy lead_self_energy(double gamma, double mu, double temperature, double omega);
SelfEnergy lead_self_energy(const Lead& lead, double omega);

/// Empty Markovian drain reached through the nonreciprocal bond:
/// Sigma^R = -i e_nh Gamma_5 and Sigma^K fixed by Sigma^< = 0.
SelfEnergy markov_self_energy(double gamma_5, double e_nh);

/// Per-site self-energies of the three-site network at one frequency.
struct SelfEnergySet {
  std::array<SelfEnergy, 3> site{};

  static SelfEnergySet assemble(const EffectiveModel& model, double omega);
  Matrix3c retarded() const;
  Matrix3c keldysh() const;
};

struct GreensPair {
  Matrix3c retarded;
  Matrix3c keldysh;

  Matrix3c advanced() const { return retarded.adjoint(); }
  Matrix3c lesser() const { return 0.5 * (keldysh - retarded + advanced()); }
};

/// Real-valued-energy part of the network Hamiltonian: diag(eps_g, eps_e,
/// Re eps_5) plus the two Hermitian bonds. The imaginary part of eps_5 is
/// carried by markov_self_energy only.
Matrix3c bare_hamiltonian(const EffectiveModel& model);

/// G^R = [w - H0 - Sigma^R]^-1 and G^K = G^R Sigma^K G^A.
GreensPair greens(double omega, const EffectiveModel& model);

struct GreensSolution {
  std::vector<double> omega;
  std::vector<GreensPair> values;
};

GreensSolution tabulate_greens(const EffectiveModel& model, const FrequencyGrid& grid);

/// Panels adapted to the resonances of H0 + Sigma^R and to the Fermi
/// edges of the leads, over a window 50x the largest model scale.
FrequencyGrid make_grid(const EffectiveModel& model);

struct SolverOptions {
  double abs_tol = 1e-10;
  int max_doublings = 12;
};

/// All steady-state observables from one frequency integration.
struct SteadyState {
  std::array<double, 3> occupations{};
  double current_left = 0.0;   // positive = into the system
  double current_right = 0.0;
  double loss_current = 0.0;   // into the drain
  double grid_error = 0.0;     // largest doubling shift over all observables
  int doublings = 0;

  double occupation(Site s) const { return occupations[static_cast<std::size_t>(s)]; }
  double continuity_residual() const { return current_left + current_right - loss_current; }
};

SteadyState solve(const EffectiveModel& model, const SolverOptions& options = {});

double occupation(const EffectiveModel& model, Site site, const SolverOptions& options = {});
double lead_current(const EffectiveModel& model, LeadSide lead, const SolverOptions& options = {});
double loss_current(const EffectiveModel& model, const SolverOptions& options = {});

}  // namespace nrbridge
