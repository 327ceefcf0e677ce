#include "nrbridge/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-14) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace

std::string regime_name(BridgeRegime regime) {
  return regime == BridgeRegime::kExactQuadratic ? "exact-quadratic" : "adiabatic";
}

double BridgeInstance::max_coupling() const { return std::max(std::abs(t_e5), std::abs(t_eg)); }

void BridgeInstance::validate() const {
  if (!(gamma_5 > 0.0)) throw DomainError("bridge instance needs Gamma_5 > 0");
  if (!(cavity_loss >= 0.0)) throw DomainError("cavity loss must be >= 0");
  for (const auto& lead : {left, right}) {
    if (!(lead.gamma >= 0.0)) throw DomainError("lead coupling must be >= 0");
    if (!(lead.nbar >= 0.0 && lead.nbar <= 1.0)) throw DomainError("lead occupation must lie in [0,1]");
  }
  if (regime == BridgeRegime::kAdiabatic) {
    if (fock_cutoff < 1) throw DomainError("Fock cutoff must be >= 1");
    if (cavity_loss < 5.0 * max_coupling() * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "adiabatic instance needs cavity_loss >= 5 max coupling (" << cavity_loss << " < "
         << 5.0 * max_coupling() << ")";
      throw DomainError(os.str());
    }
  }
}

LindbladSystem build_full_lindblad(const BridgeInstance& inst) {
  return build_full_lindblad(inst, inst.fock_cutoff);
}

LindbladSystem build_full_lindblad(const BridgeInstance& inst, int fock_cutoff) {
  inst.validate();
  const bool photon = inst.regime == BridgeRegime::kAdiabatic;
  std::vector<Mode> modes{Mode::fermion(), Mode::fermion(), Mode::fermion()};
  if (photon) {
    if (fock_cutoff < 1) throw DomainError("Fock cutoff must be >= 1");
    modes.push_back(Mode::boson(fock_cutoff));
  }
  LindbladSystem sys{HilbertSpace(std::move(modes)), {}, {}, 0, 1, 2, std::nullopt, std::nullopt, 0.0};
  const HilbertSpace& hs = sys.space;
  const MatrixC cg = hs.annihilator(sys.mode_g);
  const MatrixC ce = hs.annihilator(sys.mode_e);
  const MatrixC c5 = hs.annihilator(sys.mode_5);

  const double shifted = inst.eps_g - inst.detuning;
  MatrixC h = inst.eps_g * cg.adjoint() * cg + shifted * (ce.adjoint() * ce + c5.adjoint() * c5);
  const MatrixC drive = inst.t_eg * ce.adjoint() * cg;
  h += drive + drive.adjoint();

  if (photon) {
    sys.mode_photon = 3;
    const MatrixC a = hs.annihilator(3);
    const MatrixC absorb = inst.t_e5 * ce.adjoint() * a * c5;
    h += absorb + absorb.adjoint();
    sys.photon_channel = sys.channels.size();
    sys.channels.push_back({a, 2.0 * inst.cavity_loss});
    sys.drain_rate = 2.0 * inst.gamma_5;
  } else {
    const MatrixC hop = inst.t_e5 * ce.adjoint() * c5;
    h += hop + hop.adjoint();
    sys.drain_rate = 2.0 * inst.e_nh() * inst.gamma_5;
  }
  sys.channels.push_back({c5, sys.drain_rate});
  for (const auto& lead : {inst.left, inst.right}) {
    sys.channels.push_back({cg, 2.0 * lead.gamma * (1.0 - lead.nbar)});
    sys.channels.push_back({cg.adjoint(), 2.0 * lead.gamma * lead.nbar});
  }
  sys.hamiltonian = std::move(h);
  return sys;
}

EffectiveModel effective_counterpart(const BridgeInstance& inst) {
  inst.validate();
  EffectiveParams p;
  p.eps_g = inst.eps_g;
  p.detuning = inst.detuning;
  p.t_eg = inst.t_eg;
  p.t_e5 = inst.t_e5;
  p.left = flat_lead(inst.left.gamma, inst.left.nbar);
  p.right = flat_lead(inst.right.gamma, inst.right.nbar);
  p.gamma_5 = inst.gamma_5;
  p.e_nh = inst.e_nh();
  return make_effective_model(p);
}

MatrixC quadratic_correlations(const BridgeInstance& inst) {
  if (inst.regime != BridgeRegime::kExactQuadratic) {
    throw DomainError("the correlation-matrix oracle needs an exact-quadratic instance");
  }
  const EffectiveModel m = effective_counterpart(inst);
  const MatrixC h = bare_hamiltonian(m);
  VectorD loss = VectorD::Zero(3);
  VectorD gain = VectorD::Zero(3);
  for (const auto& lead : {inst.left, inst.right}) {
    loss(0) += 2.0 * lead.gamma * (1.0 - lead.nbar);
    gain(0) += 2.0 * lead.gamma * lead.nbar;
  }
  loss(2) = 2.0 * m.e_nh * m.gamma_5;
  return quadratic_steady_state(h, loss, gain);
}

double atom_number_balance(const LindbladSystem& sys, const DensityMatrix& rho) {
  const MatrixC n_atoms = sys.space.fermion_number();
  std::vector<JumpChannel> atom_channels;
  for (std::size_t k = 0; k < sys.channels.size(); ++k) {
    if (sys.photon_channel && *sys.photon_channel == k) continue;
    atom_channels.push_back(sys.channels[k]);
  }
  // Photon loss never changes the atom number, so dropping it is exact.
  const MatrixC drift = liouvillian_apply(sys.hamiltonian, atom_channels, rho.matrix());
  return std::abs(expectation(n_atoms, DensityMatrix(drift)));
}

namespace {

struct LindbladSide {
  double loss = 0.0;
  std::array<double, 3> occupations{};
  double photon_number = 0.0;
  double balance = 0.0;
};

LindbladSide run_lindblad(const BridgeInstance& inst, int cutoff) {
  const LindbladSystem sys = build_full_lindblad(inst, cutoff);
  const DensityMatrix rho = steady_state(sys.hamiltonian, sys.channels);
  LindbladSide out;
  out.occupations = {expectation(sys.space.number(sys.mode_g), rho).real(),
                     expectation(sys.space.number(sys.mode_e), rho).real(),
                     expectation(sys.space.number(sys.mode_5), rho).real()};
  out.loss = sys.drain_rate * out.occupations[2];
  if (sys.mode_photon) out.photon_number = expectation(sys.space.number(*sys.mode_photon), rho).real();
  out.balance = atom_number_balance(sys, rho);
  return out;
}

}  // namespace

BridgeReport compare(const BridgeInstance& inst, const BridgeOptions& options) {
  inst.validate();
  BridgeReport r;
  r.regime = inst.regime;
  r.e_nh = inst.e_nh();

  const LindbladSide lind = run_lindblad(inst, inst.fock_cutoff);
  r.loss_lindblad = lind.loss;
  r.occupations_lindblad = lind.occupations;
  r.photon_number = lind.photon_number;
  r.atom_balance_residual = lind.balance;

  if (inst.regime == BridgeRegime::kAdiabatic) {
    const LindbladSide doubled = run_lindblad(inst, 2 * inst.fock_cutoff);
    r.cutoff_shift = relative(doubled.loss, lind.loss);
    if (r.cutoff_shift > options.cutoff_tolerance) {
      std::ostringstream os;
      os << "Fock cutoff " << inst.fock_cutoff << " not converged: doubling shifts the loss current by "
         << r.cutoff_shift << " (relative), limit " << options.cutoff_tolerance;
      throw ConvergenceError(os.str());
    }
  }

  const SteadyState keld = solve(effective_counterpart(inst), options.solver);
  r.loss_keldysh = keld.loss_current;
  r.occupations_keldysh = keld.occupations;
  r.grid_shift = keld.grid_error;
  r.relative_deviation = relative(r.loss_lindblad, r.loss_keldysh);

  if (inst.regime == BridgeRegime::kExactQuadratic) {
    const MatrixC c = quadratic_correlations(inst);
    std::array<double, 3> lyap{c(0, 0).real(), c(1, 1).real(), c(2, 2).real()};
    r.occupations_lyapunov = lyap;
    r.loss_lyapunov = 2.0 * r.e_nh * inst.gamma_5 * lyap[2];
    r.relative_deviation = std::max({r.relative_deviation, relative(*r.loss_lyapunov, r.loss_lindblad),
                                     relative(*r.loss_lyapunov, r.loss_keldysh)});
    for (std::size_t j = 0; j < 3; ++j) {
      r.occupation_deviation = std::max({r.occupation_deviation,
                                         std::abs(lind.occupations[j] - keld.occupations[j]),
                                         std::abs(lyap[j] - keld.occupations[j]),
                                         std::abs(lyap[j] - lind.occupations[j])});
    }
    r.passed = r.relative_deviation <= options.exact_tolerance &&
               r.occupation_deviation <= options.exact_tolerance;
  } else {
    // Site 5 of the effective network holds only the photon-dressed
    // intermediate, so occupations are compared on g and e.
    for (std::size_t j = 0; j < 2; ++j) {
      r.occupation_deviation =
          std::max(r.occupation_deviation, std::abs(lind.occupations[j] - keld.occupations[j]));
    }
    r.passed = r.relative_deviation <= options.adiabatic_tolerance;
  }
  return r;
}

LadderReport compare_ladder(const BridgeInstance& base, std::span<const double> ratios,
                            const BridgeOptions& options) {
  LadderReport out;
  for (double ratio : ratios) {
    BridgeInstance inst = base;
    inst.regime = BridgeRegime::kAdiabatic;
    inst.cavity_loss = ratio * base.max_coupling();
    out.ratios.push_back(ratio);
    out.reports.push_back(compare(inst, options));
  }
  out.strictly_decreasing = true;
  for (std::size_t k = 1; k < out.reports.size(); ++k) {
    if (!(out.reports[k].relative_deviation < out.reports[k - 1].relative_deviation)) {
      out.strictly_decreasing = false;
    }
  }
  return out;
}

}  // namespace nrbridge
