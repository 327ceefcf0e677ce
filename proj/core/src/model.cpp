#include "nrbridge/model.hpp"

#include <cmath>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << " (got " << value << ")";
  return os.str();
}

}  // namespace

void MicroscopicParams::validate() const {
  if (!(eps_e > eps_5 && eps_5 > eps_g)) {
    throw DomainError("level ordering eps_e > eps_5 > eps_g violated");
  }
  if (!(cavity_loss >= 0.0)) throw DomainError(describe("cavity loss must be >= 0", cavity_loss));
  if (!(temperature >= 0.0)) throw DomainError(describe("temperature must be >= 0", temperature));
  for (double v : {fermi_velocity.bath, fermi_velocity.left, fermi_velocity.right}) {
    if (!(v > 0.0)) throw DomainError(describe("Fermi velocity must be > 0", v));
  }
  if (omega_e5) {
    const double resonant = eps_e - eps_5;
    if (std::abs(*omega_e5 - resonant) > 1e-12 * std::max(1.0, std::abs(resonant))) {
      throw DomainError(describe("omega_e5 must equal eps_e - eps_5 for the spontaneous mode",
                                 *omega_e5));
    }
  }
  if (!t_e5_eff && !alpha_e5) {
    throw DomainError("either alpha_e5 or t_e5_eff must be given");
  }
}

double Lead::distribution(double omega) const {
  if (const auto* flat = std::get_if<FlatOccupation>(&occupation)) return flat->nbar;
  return 0.5 * (1.0 - keldysh_factor(omega));
}

double Lead::keldysh_factor(double omega) const {
  if (const auto* flat = std::get_if<FlatOccupation>(&occupation)) return 1.0 - 2.0 * flat->nbar;
  const auto& g = std::get<GibbsOccupation>(occupation);
  const double x = omega - g.mu;
  if (g.temperature == 0.0) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
  }
  return std::tanh(x / (2.0 * g.temperature));
}

Lead gibbs_lead(double gamma, double mu, double temperature) {
  if (!(gamma >= 0.0)) throw DomainError(describe("lead coupling must be >= 0", gamma));
  if (!(temperature >= 0.0)) throw DomainError(describe("temperature must be >= 0", temperature));
  return Lead{gamma, GibbsOccupation{mu, temperature}};
}

Lead flat_lead(double gamma, double nbar) {
  if (!(gamma >= 0.0)) throw DomainError(describe("lead coupling must be >= 0", gamma));
  if (!(nbar >= 0.0 && nbar <= 1.0)) throw DomainError(describe("occupation must lie in [0,1]", nbar));
  return Lead{gamma, FlatOccupation{nbar}};
}

void EffectiveModel::validate() const {
  if (!(gamma_5 > 0.0)) throw DomainError(describe("bath coupling Gamma_5 must be > 0", gamma_5));
  if (!(e_nh >= 1.0)) throw DomainError(describe("enhancement must be >= 1", e_nh));
  if (!(left.gamma >= 0.0 && right.gamma >= 0.0)) throw DomainError("lead couplings must be >= 0");
  if (eps_5.real() != eps_e) throw DomainError("eps_5 real part must equal eps_e");
  if (eps_5.imag() != -e_nh * gamma_5) throw DomainError("eps_5 imaginary part must be -e_nh Gamma_5");
}

EffectiveModel make_effective_model(const EffectiveParams& params) {
  if (!(params.gamma_5 > 0.0)) {
    throw DomainError(describe("bath coupling Gamma_5 must be > 0", params.gamma_5));
  }
  if (!(params.e_nh >= 1.0)) throw DomainError(describe("enhancement must be >= 1", params.e_nh));
  EffectiveModel m;
  m.eps_g = params.eps_g;
  const double shifted = params.eps_g - params.detuning;
  m.eps_e = shifted;
  m.eps_5 = {shifted, -params.e_nh * params.gamma_5};
  m.t_eg = params.t_eg;
  m.t_e5 = params.t_e5;
  m.left = params.left;
  m.right = params.right;
  m.gamma_5 = params.gamma_5;
  m.e_nh = params.e_nh;
  m.validate();
  return m;
}

// Shewchuk's grow-expansion: the partials are non-overlapping and their
// exact sum equals the exact sum of everything added so far.
ExactSum& ExactSum::add(double x) {
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  if (x != 0.0) partials_.push_back(x);
  return *this;
}

ExactSum& ExactSum::operator+=(const ExactSum& other) {
  // Copy first: `other` may alias *this.
  const std::vector<double> parts = other.partials_;
  for (double p : parts) add(p);
  return *this;
}

ExactSum& ExactSum::operator-=(const ExactSum& other) {
  const std::vector<double> parts = other.partials_;
  for (double p : parts) add(-p);
  return *this;
}

ExactSum ExactSum::operator-() const {
  ExactSum out;
  out.partials_.reserve(partials_.size());
  for (double p : partials_) out.partials_.push_back(-p);
  return out;
}

double ExactSum::value() const {
  if (partials_.empty()) return 0.0;
  // Round-half-even correction as in Python's math.fsum.
  auto n = static_cast<std::ptrdiff_t>(partials_.size()) - 1;
  double hi = partials_[static_cast<std::size_t>(n)];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[static_cast<std::size_t>(--n)];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials_[static_cast<std::size_t>(n - 1)] < 0.0) ||
                (lo > 0.0 && partials_[static_cast<std::size_t>(n - 1)] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

Term parse_term(std::string_view name) {
  if (name == "ge+") return {Bond::kGE, Direction::kForward};
  if (name == "ge-") return {Bond::kGE, Direction::kReverse};
  if (name == "e5+") return {Bond::kE5, Direction::kForward};
  if (name == "e5-") return {Bond::kE5, Direction::kReverse};
  if (name == "55b+") return {Bond::kBath, Direction::kForward};
  if (name == "55b-") return {Bond::kBath, Direction::kReverse};
  throw LookupError("unknown Hamiltonian term '" + std::string(name) + "'");
}

std::string term_name(Term term) {
  std::string out;
  switch (term.bond) {
    case Bond::kGE: out = "ge"; break;
    case Bond::kE5: out = "e5"; break;
    case Bond::kBath: out = "55b"; break;
  }
  return out + (term.direction == Direction::kForward ? "+" : "-");
}

std::array<Term, 6> all_terms() {
  return {Term{Bond::kGE, Direction::kForward},   Term{Bond::kGE, Direction::kReverse},
          Term{Bond::kE5, Direction::kForward},   Term{Bond::kE5, Direction::kReverse},
          Term{Bond::kBath, Direction::kForward}, Term{Bond::kBath, Direction::kReverse}};
}

void GaugeLedger::transform(GaugeMode mode, const GaugeRate& rate, CreatorConvention convention) {
  auto& e = entries_[static_cast<std::size_t>(mode)];
  e.annihilator += rate;
  e.creator += convention == CreatorConvention::kGeneralized ? rate : rate.conj();
  if (convention == CreatorConvention::kGeneralized) e.convention = convention;
}

const GaugeRate& GaugeLedger::annihilator_rate(GaugeMode mode) const {
  return entries_[static_cast<std::size_t>(mode)].annihilator;
}

const GaugeRate& GaugeLedger::creator_rate(GaugeMode mode) const {
  return entries_[static_cast<std::size_t>(mode)].creator;
}

CreatorConvention GaugeLedger::convention(GaugeMode mode) const {
  return entries_[static_cast<std::size_t>(mode)].convention;
}

GaugeRate GaugeLedger::residual_rate(Term term) const {
  // An annihilator contributes +r, a creator -r'.
  const auto ann = [this](GaugeMode m) { return annihilator_rate(m); };
  const auto cre = [this](GaugeMode m) { return creator_rate(m); };
  const bool fwd = term.direction == Direction::kForward;
  switch (term.bond) {
    case Bond::kGE:
      // c_e^+ a_eg c_g  |  c_g^+ a_eg^+ c_e
      return fwd ? ann(GaugeMode::kPhotonEG) + ann(GaugeMode::kAtomG) - cre(GaugeMode::kAtomE)
                 : ann(GaugeMode::kAtomE) - cre(GaugeMode::kAtomG) - cre(GaugeMode::kPhotonEG);
    case Bond::kE5:
      // c_e^+ a_e5 c_5  |  c_5^+ a_e5^+ c_e
      return fwd ? ann(GaugeMode::kPhotonE5) + ann(GaugeMode::kAtom5) - cre(GaugeMode::kAtomE)
                 : ann(GaugeMode::kAtomE) - cre(GaugeMode::kAtom5) - cre(GaugeMode::kPhotonE5);
    case Bond::kBath:
      // c_5b^+ c_5  |  c_5^+ c_5b
      return fwd ? ann(GaugeMode::kAtom5) - cre(GaugeMode::kBath5b)
                 : ann(GaugeMode::kBath5b) - cre(GaugeMode::kAtom5);
  }
  throw LookupError("unknown bond");
}

cplx GaugeLedger::frame_energy(GaugeMode mode, double bare_energy) const {
  return cplx{bare_energy, 0.0} - annihilator_rate(mode).value();
}

GaugeLedger build_gauge_ledger(const MicroscopicParams& p, GaugeStage upto) {
  using M = GaugeMode;
  constexpr auto kHerm = CreatorConvention::kHermitian;
  constexpr auto kGen = CreatorConvention::kGeneralized;

  GaugeLedger ledger;
  const ExactSum delta = ExactSum(p.omega_eg) - ExactSum(p.eps_e) + ExactSum(p.eps_g);
  ledger.set_detuning(delta);
  ledger.set_delta_mu_eff(
      GaugeRate{delta + ExactSum(p.eps_5) - ExactSum(p.eps_g), ExactSum(p.cavity_loss)});

  const auto reached = [upto](GaugeStage s) { return static_cast<int>(upto) >= static_cast<int>(s); };

  if (!reached(GaugeStage::kPhotonFrame)) return ledger;
  ledger.transform(M::kPhotonEG, GaugeRate{p.omega_eg}, kHerm);
  // Resonant spontaneous mode at its complex frequency omega_e5 - i Gamma_e5.
  ledger.transform(M::kPhotonE5,
                   GaugeRate{ExactSum(p.eps_e) - ExactSum(p.eps_5), -ExactSum(p.cavity_loss)}, kGen);
  ledger.set_stage(GaugeStage::kPhotonFrame);

  if (!reached(GaugeStage::kRotatingFrame)) return ledger;
  ledger.transform(M::kAtomG, GaugeRate{p.eps_g}, kHerm);
  ledger.transform(M::kAtomE, GaugeRate{p.eps_e}, kHerm);
  ledger.transform(M::kAtom5, GaugeRate{p.eps_5}, kHerm);
  ledger.set_stage(GaugeStage::kRotatingFrame);

  if (!reached(GaugeStage::kInternalShift)) return ledger;
  ledger.transform(M::kAtomG, GaugeRate{-ExactSum(p.eps_g)}, kHerm);
  ledger.transform(M::kAtomE, GaugeRate{delta - ExactSum(p.eps_g)}, kHerm);
  ledger.transform(M::kAtom5, GaugeRate{delta - ExactSum(p.eps_g), ExactSum(p.cavity_loss)}, kGen);
  ledger.set_stage(GaugeStage::kInternalShift);

  if (!reached(GaugeStage::kSpaceTime)) return ledger;
  // At x = 0 the continuum field is transformed identically to c_5.
  ledger.transform(M::kBath5b, ledger.annihilator_rate(M::kAtom5), kGen);
  ledger.set_stage(GaugeStage::kSpaceTime);
  return ledger;
}

cplx ledger_residual(const GaugeLedger& ledger, Term term) {
  return ledger.residual_rate(term).value();
}

cplx ledger_residual(const GaugeLedger& ledger, std::string_view name) {
  return ledger_residual(ledger, parse_term(name));
}

double detuning(const MicroscopicParams& p) { return p.omega_eg - (p.eps_e - p.eps_g); }

double enhancement(double cavity_loss, double gamma_5) {
  if (!(gamma_5 > 0.0)) throw DomainError(describe("bath coupling Gamma_5 must be > 0", gamma_5));
  if (!(cavity_loss >= 0.0)) throw DomainError(describe("cavity loss must be >= 0", cavity_loss));
  return 1.0 + cavity_loss / gamma_5;
}

double bath_rate(cplx t, double fermi_velocity) {
  if (!(fermi_velocity > 0.0)) throw DomainError(describe("Fermi velocity must be > 0", fermi_velocity));
  return std::norm(t) / (2.0 * fermi_velocity);
}

ReducedModel reduce(const MicroscopicParams& p) {
  p.validate();
  ReducedModel out;
  out.ledger = build_gauge_ledger(p, GaugeStage::kSpaceTime);

  const double gamma_5 = bath_rate(p.t_bath, p.fermi_velocity.bath);
  const double e_nh = enhancement(p.cavity_loss, gamma_5);

  EffectiveParams eff;
  eff.eps_g = p.eps_g;
  eff.detuning = detuning(p);
  eff.t_eg = p.lambda_eg * p.alpha_eg;
  eff.t_e5 = p.t_e5_eff ? *p.t_e5_eff : p.lambda_e5 * *p.alpha_e5;
  eff.left = gibbs_lead(bath_rate(p.t_left, p.fermi_velocity.left), p.mu_left, p.temperature);
  eff.right = gibbs_lead(bath_rate(p.t_right, p.fermi_velocity.right), p.mu_right, p.temperature);
  eff.gamma_5 = gamma_5;
  eff.e_nh = e_nh;
  out.model = make_effective_model(eff);
  return out;
}

}  // namespace nrbridge
