#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nrbridge {

using cplx = std::complex<double>;

/// Physical units throughout: hbar = k_B = 1 and 2 v_F = 1 unless a
/// different Fermi velocity is given explicitly.
inline constexpr double kDefaultFermiVelocity = 0.5;

struct FermiVelocities {
  double bath = kDefaultFermiVelocity;
  double left = kDefaultFermiVelocity;
  double right = kDefaultFermiVelocity;
};

/// Parameters of the atom + photon + junction Hamiltonian in the lab frame.
struct MicroscopicParams {
  double eps_g = 0.0;
  double eps_e = 10.0;
  double eps_5 = 1.0;
  double omega_eg = 10.0;
  // The spontaneous e->5 photon is resonant; when given explicitly it must
  // equal eps_e - eps_5.
  std::optional<double> omega_e5;
  cplx lambda_eg{1.0, 0.0};
  cplx lambda_e5{1.0, 0.0};
  cplx alpha_eg{1.0, 0.0};
  // Either the coherent amplitude of the spontaneous mode or the effective
  // e-5 hopping must be supplied.
  std::optional<cplx> alpha_e5;
  std::optional<cplx> t_e5_eff;
  double cavity_loss = 0.0;  // Gamma_e5, photon amplitude decay rate
  cplx t_bath{1.0, 0.0};     // hopping from |5> into the untrapped continuum
  cplx t_left{0.5, 0.0};
  cplx t_right{0.5, 0.0};
  double mu_left = 0.0;
  double mu_right = 0.0;
  double temperature = 0.1;
  FermiVelocities fermi_velocity{};

  /// Throws DomainError when a level-ordering or sign invariant fails.
  void validate() const;
};

/// Thermal (Gibbsian) lead occupation f(w) = 1 / (exp((w - mu)/T) + 1).
struct GibbsOccupation {
  double mu = 0.0;
  double temperature = 0.0;
};

/// Frequency-independent occupation, the Markovian limit of a lead.
struct FlatOccupation {
  double nbar = 0.0;
};

struct Lead {
  double gamma = 0.0;
  std::variant<GibbsOccupation, FlatOccupation> occupation = GibbsOccupation{};

  /// f(w), exactly 1/2 at w = mu for T = 0.
  double distribution(double omega) const;
  /// 1 - 2 f(w): tanh((w - mu) / 2T) for Gibbs leads.
  double keldysh_factor(double omega) const;
  bool is_gibbs() const { return std::holds_alternative<GibbsOccupation>(occupation); }
};

Lead gibbs_lead(double gamma, double mu, double temperature);
Lead flat_lead(double gamma, double nbar);

/// Purely fermionic three-site network g - e - 5 with two leads on g and
/// a nonreciprocal Markovian drain on 5.
struct EffectiveModel {
  double eps_g = 0.0;
  double eps_e = 0.0;
  cplx eps_5{0.0, -1.0};
  cplx t_eg{0.0, 0.0};
  cplx t_e5{1.0, 0.0};
  Lead left{};
  Lead right{};
  double gamma_5 = 1.0;
  double e_nh = 1.0;

  void validate() const;
};

/// Inputs for building an EffectiveModel directly in effective units.
struct EffectiveParams {
  double eps_g = 0.0;
  double detuning = 0.0;
  cplx t_eg{0.0, 0.0};
  cplx t_e5{1.0, 0.0};
  Lead left = gibbs_lead(0.25, 0.0, 0.1);
  Lead right = gibbs_lead(0.25, 0.0, 0.1);
  double gamma_5 = 1.0;
  double e_nh = 1.0;
};

EffectiveModel make_effective_model(const EffectiveParams& params);

/// Unevaluated sum of doubles kept as non-overlapping partials, so that
/// sums which cancel in exact arithmetic evaluate to exactly zero.
class ExactSum {
 public:
  ExactSum() = default;
  ExactSum(double x) { add(x); }  // NOLINT(google-explicit-constructor)

  ExactSum& add(double x);
  ExactSum& operator+=(const ExactSum& other);
  ExactSum& operator-=(const ExactSum& other);
  friend ExactSum operator+(ExactSum a, const ExactSum& b) { return a += b; }
  friend ExactSum operator-(ExactSum a, const ExactSum& b) { return a -= b; }
  ExactSum operator-() const;

  double value() const;
  bool is_zero() const { return partials_.empty(); }

 private:
  std::vector<double> partials_;
};

/// Complex exponent rate r of a factor exp(-i r t).
struct GaugeRate {
  ExactSum re;
  ExactSum im;

  GaugeRate() = default;
  GaugeRate(ExactSum real, ExactSum imag = {}) : re(std::move(real)), im(std::move(imag)) {}

  GaugeRate& operator+=(const GaugeRate& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaugeRate& operator-=(const GaugeRate& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaugeRate operator+(GaugeRate a, const GaugeRate& b) { return a += b; }
  friend GaugeRate operator-(GaugeRate a, const GaugeRate& b) { return a -= b; }
  GaugeRate conj() const { return {re, -im}; }
  cplx value() const { return {re.value(), im.value()}; }
};

enum class GaugeMode { kPhotonEG = 0, kPhotonE5, kAtomG, kAtomE, kAtom5, kBath5b };
inline constexpr std::size_t kGaugeModeCount = 6;

/// How the creation operator of a mode transforms: with the complex
/// conjugate rate (ordinary phase rotation) or with the same complex rate
/// (the non-unitary convention that leaves c^dagger c invariant).
enum class CreatorConvention { kHermitian, kGeneralized };

/// Steps of the transformation chain, in the order they are applied.
enum class GaugeStage {
  kLab = 0,
  kPhotonFrame,    // photons rotated, leaky mode at its complex frequency
  kRotatingFrame,  // atoms rotated at their bare energies as well
  kInternalShift,  // time dependence pushed from g and e onto |5>
  kSpaceTime,      // continuum field transformed along the light cone
};

enum class Bond { kGE, kE5, kBath };
enum class Direction { kForward, kReverse };

/// One Hamiltonian term: the forward term of a bond moves the particle
/// away from g (c_e^+ a c_g, c_e^+ a c_5, c_5b^+ c_5); the reverse term is
/// its conjugate partner.
struct Term {
  Bond bond;
  Direction direction;
};

/// Parses "ge+", "ge-", "e5+", "e5-", "55b+", "55b-". Throws LookupError.
Term parse_term(std::string_view name);
std::string term_name(Term term);
std::array<Term, 6> all_terms();

class GaugeLedger {
 public:
  /// Applies c -> exp(-i r t) c to the annihilator of `mode`.
  void transform(GaugeMode mode, const GaugeRate& rate, CreatorConvention convention);

  /// Accumulated rate applied to the annihilator.
  const GaugeRate& annihilator_rate(GaugeMode mode) const;
  /// Accumulated rate r' with c^+ -> exp(+i r' t) c^+.
  const GaugeRate& creator_rate(GaugeMode mode) const;
  CreatorConvention convention(GaugeMode mode) const;

  /// Net rate of the explicit exp(-i r t) carried by `term`.
  GaugeRate residual_rate(Term term) const;

  /// On-site energy in the transformed frame: bare energy minus the rate.
  cplx frame_energy(GaugeMode mode, double bare_energy) const;

  GaugeStage stage() const { return stage_; }
  void set_stage(GaugeStage stage) { stage_ = stage; }

  double detuning() const { return detuning_.value(); }
  cplx delta_mu_eff() const { return delta_mu_eff_.value(); }
  void set_detuning(ExactSum d) { detuning_ = std::move(d); }
  void set_delta_mu_eff(GaugeRate d) { delta_mu_eff_ = std::move(d); }

 private:
  struct Entry {
    GaugeRate annihilator;
    GaugeRate creator;
    CreatorConvention convention = CreatorConvention::kHermitian;
  };
  std::array<Entry, kGaugeModeCount> entries_{};
  GaugeStage stage_ = GaugeStage::kLab;
  ExactSum detuning_;
  GaugeRate delta_mu_eff_;
};

/// Builds the transformation chain up to and including `upto`.
GaugeLedger build_gauge_ledger(const MicroscopicParams& p,
                               GaugeStage upto = GaugeStage::kSpaceTime);

/// Net complex exponent rate of `term`; zero for every term after the full chain.
cplx ledger_residual(const GaugeLedger& ledger, Term term);
cplx ledger_residual(const GaugeLedger& ledger, std::string_view term_name);

/// hbar delta_eg = hbar omega_eg - (eps_e - eps_g).
double detuning(const MicroscopicParams& p);

/// e_nh = 1 + Gamma_e5 / Gamma_5. Throws DomainError for Gamma_5 <= 0.
double enhancement(double cavity_loss, double gamma_5);

/// Hybridization width |t|^2 / (2 v_F) of a linearized chiral continuum.
double bath_rate(cplx t, double fermi_velocity = kDefaultFermiVelocity);

struct ReducedModel {
  EffectiveModel model;
  GaugeLedger ledger;
};

/// Microscopic parameters to the effective fermionic network.
ReducedModel reduce(const MicroscopicParams& p);

}  // namespace nrbridge
