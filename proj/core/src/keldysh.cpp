#include "nrbridge/keldysh.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

// Components of the frequency integrand, each already divided by 2 pi.
enum Component : std::size_t { kNg, kNe, kN5, kCurrentL, kCurrentR, kLoss, kComponents };

}  // namespace

SelfEnergy lead_self_energy(double gamma, double mu, double temperature, double omega) {
  return lead_self_energy(gibbs_lead(gamma, mu, temperature), omega);
}

SelfEnergy lead_self_energy(const Lead& lead, double omega) {
  return {cplx{0.0, -lead.gamma}, cplx{0.0, -2.0 * lead.gamma * lead.keldysh_factor(omega)}};
}

SelfEnergy markov_self_energy(double gamma_5, double e_nh) {
  if (!(gamma_5 > 0.0)) throw DomainError("Markov bath coupling must be > 0");
  if (!(e_nh >= 1.0)) throw DomainError("enhancement must be >= 1");
  const double width = e_nh * gamma_5;
  // Sigma^K = Sigma^R - Sigma^A: an empty reservoir injects nothing.
  return {cplx{0.0, -width}, cplx{0.0, -2.0 * width}};
}

SelfEnergySet SelfEnergySet::assemble(const EffectiveModel& model, double omega) {
  SelfEnergySet set;
  const SelfEnergy left = lead_self_energy(model.left, omega);
  const SelfEnergy right = lead_self_energy(model.right, omega);
  set.site[0] = {left.retarded + right.retarded, left.keldysh + right.keldysh};
  set.site[2] = markov_self_energy(model.gamma_5, model.e_nh);
  return set;
}

Matrix3c SelfEnergySet::retarded() const {
  Matrix3c m = Matrix3c::Zero();
  for (int j = 0; j < 3; ++j) m(j, j) = site[static_cast<std::size_t>(j)].retarded;
  return m;
}

Matrix3c SelfEnergySet::keldysh() const {
  Matrix3c m = Matrix3c::Zero();
  for (int j = 0; j < 3; ++j) m(j, j) = site[static_cast<std::size_t>(j)].keldysh;
  return m;
}

Matrix3c bare_hamiltonian(const EffectiveModel& model) {
  // The drain broadening must live in exactly one place.
  if (model.eps_5.imag() != -model.e_nh * model.gamma_5) {
    throw DomainError("eps_5 imaginary part disagrees with the Markov self-energy");
  }
  Matrix3c h = Matrix3c::Zero();
  h(0, 0) = model.eps_g;
  h(1, 1) = model.eps_e;
  h(2, 2) = model.eps_5.real();
  // t_eg multiplies c_e^+ c_g, so it sits in row e, column g.
  h(1, 0) = model.t_eg;
  h(0, 1) = std::conj(model.t_eg);
  h(1, 2) = model.t_e5;
  h(2, 1) = std::conj(model.t_e5);
  return h;
}

namespace {

GreensPair greens_with(double omega, const Matrix3c& h0, const SelfEnergySet& sigma) {
  const Matrix3c inv = omega * Matrix3c::Identity() - h0 - sigma.retarded();
  const cplx det = inv.determinant();
  if (det == cplx{0.0, 0.0} || !std::isfinite(std::abs(det))) {
    std::ostringstream os;
    os << "singular inverse Green function at omega = " << omega;
    throw SingularityError(os.str());
  }
  GreensPair g;
  g.retarded = inv.inverse();
  g.keldysh = g.retarded * sigma.keldysh() * g.retarded.adjoint();
  return g;
}

}  // namespace

GreensPair greens(double omega, const EffectiveModel& model) {
  return greens_with(omega, bare_hamiltonian(model), SelfEnergySet::assemble(model, omega));
}

GreensSolution tabulate_greens(const EffectiveModel& model, const FrequencyGrid& grid) {
  GreensSolution out;
  out.omega = grid.nodes();
  out.values.reserve(out.omega.size());
  for (double w : out.omega) out.values.push_back(greens(w, model));
  return out;
}

FrequencyGrid make_grid(const EffectiveModel& model) {
  double scale = 0.0;
  for (double x : {std::abs(model.eps_g), std::abs(model.eps_e), std::abs(model.eps_5.real()),
                   std::abs(model.t_eg), std::abs(model.t_e5), model.left.gamma + model.right.gamma,
                   model.e_nh * model.gamma_5}) {
    scale = std::max(scale, x);
  }
  std::vector<double> points{0.0};
  for (const Lead* lead : {&model.left, &model.right}) {
    if (const auto* g = std::get_if<GibbsOccupation>(&lead->occupation)) {
      scale = std::max({scale, std::abs(g->mu), g->temperature});
      points.push_back(g->mu);
      if (g->temperature > 0.0) {
        for (double s : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
          points.push_back(g->mu - s * g->temperature);
          points.push_back(g->mu + s * g->temperature);
        }
      }
    }
  }
  const double omega = 50.0 * scale;

  // Resonances of the non-Hermitian single-particle operator H0 + Sigma^R.
  Matrix3c heff = bare_hamiltonian(model);
  heff(0, 0) += cplx{0.0, -(model.left.gamma + model.right.gamma)};
  heff(2, 2) += cplx{0.0, -model.e_nh * model.gamma_5};
  const Eigen::ComplexEigenSolver<Matrix3c> es(heff, false);
  for (int k = 0; k < 3; ++k) {
    const cplx z = es.eigenvalues()(k);
    const double width = std::max(std::abs(z.imag()), 1e-6 * scale);
    points.push_back(z.real());
    for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      points.push_back(z.real() - s * width);
      points.push_back(z.real() + s * width);
    }
  }
  return FrequencyGrid::with_points(omega, std::move(points), omega / 16.0);
}

SteadyState solve(const EffectiveModel& model, const SolverOptions& options) {
  model.validate();
  const Matrix3c h0 = bare_hamiltonian(model);
  const double loss_rate = 2.0 * model.e_nh * model.gamma_5;

  const auto integrand = [&](double omega, std::span<double> out) {
    const SelfEnergySet sigma = SelfEnergySet::assemble(model, omega);
    const GreensPair g = greens_with(omega, h0, sigma);
    const Matrix3c lesser = g.lesser();
    for (std::size_t j = 0; j < 3; ++j) {
      out[kNg + j] = (-kI * lesser(static_cast<int>(j), static_cast<int>(j))).real() * kInvTwoPi;
    }
    const double spectral_g = -2.0 * g.retarded(0, 0).imag();
    const double filled_g = (-kI * lesser(0, 0)).real();
    out[kCurrentL] = 2.0 * model.left.gamma *
                     (model.left.distribution(omega) * spectral_g - filled_g) * kInvTwoPi;
    out[kCurrentR] = 2.0 * model.right.gamma *
                     (model.right.distribution(omega) * spectral_g - filled_g) * kInvTwoPi;
    out[kLoss] = loss_rate * out[kN5];
  };

  const QuadratureResult q =
      integrate(integrand, kComponents, make_grid(model), {options.abs_tol, options.max_doublings});
  SteadyState s;
  s.occupations = {q.values[kNg], q.values[kNe], q.values[kN5]};
  s.current_left = q.values[kCurrentL];
  s.current_right = q.values[kCurrentR];
  s.loss_current = q.values[kLoss];
  s.grid_error = q.max_error();
  s.doublings = q.doublings;
  return s;
}

double occupation(const EffectiveModel& model, Site site, const SolverOptions& options) {
  return solve(model, options).occupation(site);
}

double lead_current(const EffectiveModel& model, LeadSide lead, const SolverOptions& options) {
  const SteadyState s = solve(model, options);
  return lead == LeadSide::kLeft ? s.current_left : s.current_right;
}

double loss_current(const EffectiveModel& model, const SolverOptions& options) {
  return solve(model, options).loss_current;
}

}  // namespace nrbridge
