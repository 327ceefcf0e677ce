#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrbridge/keldysh.hpp"
#include "nrbridge/lindblad.hpp"
#include "nrbridge/model.hpp"

namespace nrbridge {

enum class BridgeRegime {
  kExactQuadratic,  // no photon mode; cavity loss folded into e_nh
  kAdiabatic,       // explicit leaky photon mode, cavity loss >> couplings
};

std::string regime_name(BridgeRegime regime);

/// Markovian lead with a frequency-independent occupation.
struct BridgeLead {
  double gamma = 0.25;
  double nbar = 1.0;
};

/// A junction both descriptions can represent. For adiabatic instances
/// t_e5 is the single-photon coupling lambda_e5 of c_e^+ a_e5 c_5, which
/// maps to the effective hopping with unit photon amplitude.
struct BridgeInstance {
  BridgeRegime regime = BridgeRegime::kExactQuadratic;
  double eps_g = 0.0;
  double detuning = 0.0;
  cplx t_eg{0.5, 0.0};
  cplx t_e5{1.0, 0.0};
  double gamma_5 = 1.0;
  double cavity_loss = 0.0;
  BridgeLead left{};
  BridgeLead right{};
  int fock_cutoff = 8;

  double e_nh() const { return enhancement(cavity_loss, gamma_5); }
  double max_coupling() const;
  void validate() const;
};

/// Many-body master equation of an instance, with handles to its modes.
struct LindbladSystem {
  HilbertSpace space;
  MatrixC hamiltonian;
  std::vector<JumpChannel> channels;
  std::size_t mode_g = 0;
  std::size_t mode_e = 1;
  std::size_t mode_5 = 2;
  std::optional<std::size_t> mode_photon;
  std::optional<std::size_t> photon_channel;
  double drain_rate = 0.0;  // rate of the c_5 jump
};

/// Modes {c_g, c_e, c_5[, a_e5]}; rotating-frame Hamiltonian with the
/// classical drive and, for adiabatic instances, the one-photon e-5
/// coupling; channels: photon loss (2 Gamma_e5), atom loss from 5, and
/// per lead c_g at 2 Gamma (1 - nbar) and c_g^+ at 2 Gamma nbar.
LindbladSystem build_full_lindblad(const BridgeInstance& inst);
LindbladSystem build_full_lindblad(const BridgeInstance& inst, int fock_cutoff);

/// Matching three-site network with flat-occupation lead self-energies.
EffectiveModel effective_counterpart(const BridgeInstance& inst);

/// Same-instance correlation-matrix oracle (exact-quadratic only).
MatrixC quadratic_correlations(const BridgeInstance& inst);

/// Net particle inflow into the atoms minus the drain outflow, evaluated on
/// a Lindblad state. Zero at steady state.
double atom_number_balance(const LindbladSystem& sys, const DensityMatrix& rho);

struct BridgeOptions {
  double exact_tolerance = 1e-6;
  double adiabatic_tolerance = 5e-2;
  // Relative shift of the Lindblad loss current when the Fock cutoff is
  // doubled. The microscopic side is the ground truth, so it is held to a
  // tenth of the exact-agreement bar regardless of regime.
  double cutoff_tolerance = 1e-7;
  SolverOptions solver{};
};

struct BridgeReport {
  BridgeRegime regime = BridgeRegime::kExactQuadratic;
  double e_nh = 1.0;
  double loss_lindblad = 0.0;
  double loss_keldysh = 0.0;
  std::optional<double> loss_lyapunov;
  std::array<double, 3> occupations_lindblad{};
  std::array<double, 3> occupations_keldysh{};
  std::optional<std::array<double, 3>> occupations_lyapunov;
  double relative_deviation = 0.0;    // of the loss current
  double occupation_deviation = 0.0;  // max over comparable sites and solver pairs
  double photon_number = 0.0;
  double atom_balance_residual = 0.0;
  double cutoff_shift = 0.0;
  double grid_shift = 0.0;
  bool passed = false;
};

/// Runs both descriptions to steady state. Throws ConvergenceError when the
/// Fock cutoff is not converged.
BridgeReport compare(const BridgeInstance& inst, const BridgeOptions& options = {});

struct LadderReport {
  std::vector<double> ratios;
  std::vector<BridgeReport> reports;
  bool strictly_decreasing = false;  // flagged, not an error, when false
};

/// Adiabatic instances with cavity_loss = ratio * max_coupling for each ratio.
LadderReport compare_ladder(const BridgeInstance& base, std::span<const double> ratios,
                            const BridgeOptions& options = {});

}  // namespace nrbridge
