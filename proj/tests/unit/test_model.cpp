#include <gtest/gtest.h>

#include <random>

#include "nrbridge/errors.hpp"
#include "nrbridge/model.hpp"

using namespace nrbridge;

namespace {

MicroscopicParams caption_params() {
  MicroscopicParams p;
  p.eps_g = 0.0;
  p.eps_5 = 1.0;
  p.eps_e = 10.0;
  p.omega_eg = 10.0;
  p.t_e5_eff = cplx(1.0, 0.0);
  return p;
}

MicroscopicParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MicroscopicParams p;
  p.eps_g = -5.0 + 10.0 * u(rng);
  p.eps_5 = p.eps_g + 0.01 + 10.0 * u(rng);
  p.eps_e = p.eps_5 + 0.01 + 10.0 * u(rng);
  p.omega_eg = p.eps_e - p.eps_g + (u(rng) - 0.5);
  if (u(rng) < 0.5) p.omega_e5 = p.eps_e - p.eps_5;
  p.cavity_loss = 10.0 * u(rng);
  p.lambda_eg = {u(rng), u(rng) - 0.5};
  p.alpha_eg = {3.0 * u(rng), 0.0};
  p.t_bath = {0.1 + u(rng), u(rng) - 0.5};
  if (u(rng) < 0.5) {
    p.t_e5_eff = cplx(0.1 + u(rng), 0.0);
  } else {
    p.lambda_e5 = {u(rng), 0.0};
    p.alpha_e5 = cplx(u(rng), u(rng));
  }
  return p;
}

}  // namespace

TEST(Detuning, ExactResonanceIsZero) {
  MicroscopicParams p = caption_params();
  p.omega_eg = p.eps_e - p.eps_g;
  EXPECT_EQ(detuning(p), 0.0);
}

TEST(Detuning, BlueAndRedDetuning) {
  MicroscopicParams p = caption_params();
  p.omega_eg = 10.1;
  EXPECT_NEAR(detuning(p), 0.1, 1e-12);
  p.omega_eg = 9.9;
  EXPECT_NEAR(detuning(p), -0.1, 1e-12);
}

TEST(Enhancement, Definition) {
  EXPECT_EQ(enhancement(0.0, 1.0), 1.0);
  EXPECT_EQ(enhancement(1.0, 1.0), 2.0);
  EXPECT_EQ(enhancement(3.0, 2.0), 2.5);
}

TEST(Enhancement, RejectsNonPositiveBathCoupling) {
  EXPECT_THROW(enhancement(1.0, 0.0), DomainError);
  EXPECT_THROW(enhancement(1.0, -1.0), DomainError);
  EXPECT_THROW(enhancement(-1.0, 1.0), DomainError);
}

TEST(BathRate, ChiralBandWidth) {
  EXPECT_EQ(bath_rate({1.0, 0.0}), 1.0);
  EXPECT_EQ(bath_rate({0.0, 0.0}), 0.0);
  EXPECT_EQ(bath_rate({0.5, 0.0}), 0.25);
  EXPECT_DOUBLE_EQ(bath_rate({0.0, 1.0}, 1.0), 0.5);
  EXPECT_THROW(bath_rate({1.0, 0.0}, 0.0), DomainError);
}

TEST(Reduce, ReciprocalLimit) {
  MicroscopicParams p = caption_params();
  p.cavity_loss = 0.0;
  const ReducedModel r = reduce(p);
  EXPECT_EQ(r.model.e_nh, 1.0);
  EXPECT_EQ(r.model.eps_5.imag(), -r.model.gamma_5);
}

TEST(Reduce, CaptionPointSiteEnergies) {
  const ReducedModel r = reduce(caption_params());
  EXPECT_EQ(r.model.eps_e, 0.0);
  EXPECT_EQ(r.model.eps_5.real(), 0.0);
}

TEST(Reduce, EnhancedDrainSiteEnergy) {
  MicroscopicParams p = caption_params();
  p.cavity_loss = 1.0;
  const ReducedModel r = reduce(p);
  EXPECT_EQ(r.model.gamma_5, 1.0);
  EXPECT_EQ(r.model.eps_5, cplx(0.0, -2.0));
}

TEST(Reduce, MeanFieldHoppings) {
  MicroscopicParams p = caption_params();
  p.lambda_eg = {0.5, 0.25};
  p.alpha_eg = {2.0, -1.0};
  p.t_e5_eff.reset();
  p.lambda_e5 = {0.5, 0.0};
  p.alpha_e5 = cplx(3.0, 0.0);
  const ReducedModel r = reduce(p);
  EXPECT_EQ(r.model.t_eg, p.lambda_eg * p.alpha_eg);
  EXPECT_EQ(r.model.t_e5, cplx(1.5, 0.0));
}

TEST(Reduce, LeadWidthsFromHoppings) {
  MicroscopicParams p = caption_params();
  p.mu_left = 0.5;
  p.mu_right = -0.5;
  const ReducedModel r = reduce(p);
  EXPECT_EQ(r.model.left.gamma, 0.25);
  EXPECT_EQ(r.model.right.gamma, 0.25);
  ASSERT_TRUE(r.model.left.is_gibbs());
  EXPECT_EQ(std::get<GibbsOccupation>(r.model.left.occupation).mu, 0.5);
}

TEST(Reduce, RejectsMissingSpontaneousAmplitude) {
  MicroscopicParams p = caption_params();
  p.t_e5_eff.reset();
  p.alpha_e5.reset();
  EXPECT_THROW(reduce(p), DomainError);
}

TEST(Reduce, RejectsLevelOrdering) {
  MicroscopicParams p = caption_params();
  p.eps_5 = 11.0;
  EXPECT_THROW(reduce(p), DomainError);
}

TEST(Reduce, RejectsOffResonantSpontaneousPhoton) {
  MicroscopicParams p = caption_params();
  p.omega_e5 = 9.5;
  EXPECT_THROW(reduce(p), DomainError);
  p.omega_e5 = 9.0;
  EXPECT_NO_THROW(reduce(p));
}

TEST(Reduce, PropagatesEnhancementErrors) {
  MicroscopicParams p = caption_params();
  p.t_bath = {0.0, 0.0};
  EXPECT_THROW(reduce(p), DomainError);
}

TEST(Reduce, SiteEnergiesBitIdenticalAndDeterministic) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const MicroscopicParams p = random_params(rng);
    const ReducedModel a = reduce(p);
    const ReducedModel b = reduce(p);
    EXPECT_EQ(a.model.eps_e, a.model.eps_5.real());
    EXPECT_EQ(a.model.eps_5.imag(), -a.model.e_nh * a.model.gamma_5);
    EXPECT_GE(a.model.e_nh, 1.0);
    EXPECT_EQ(a.model.e_nh == 1.0, p.cavity_loss == 0.0);
    EXPECT_EQ(a.model.eps_5, b.model.eps_5);
    EXPECT_EQ(a.model.t_eg, b.model.t_eg);
    EXPECT_EQ(a.ledger.delta_mu_eff(), b.ledger.delta_mu_eff());
  }
}

TEST(GaugeLedger, FullChainResidualsVanishExactly) {
  const GaugeLedger l = build_gauge_ledger(caption_params());
  for (const char* name : {"ge+", "ge-", "e5+", "e5-", "55b+", "55b-"}) {
    EXPECT_EQ(ledger_residual(l, name), cplx(0.0, 0.0)) << name;
  }
}

TEST(GaugeLedger, CavityDecayAfterRotatingFrame) {
  MicroscopicParams p = caption_params();
  p.cavity_loss = 0.75;
  const GaugeLedger l = build_gauge_ledger(p, GaugeStage::kRotatingFrame);
  EXPECT_EQ(ledger_residual(l, "e5+"), cplx(0.0, -0.75));
  EXPECT_EQ(ledger_residual(l, "ge+"), cplx(0.0, 0.0));
}

TEST(GaugeLedger, ContinuumBondBeforeSpaceTimeStep) {
  MicroscopicParams p = caption_params();
  p.eps_g = -0.5;
  p.eps_5 = 1.25;
  p.omega_eg = 10.75;
  p.cavity_loss = 0.5;
  const GaugeLedger l = build_gauge_ledger(p, GaugeStage::kInternalShift);
  const double delta = detuning(p);
  EXPECT_EQ(l.delta_mu_eff(), cplx(delta + (p.eps_5 - p.eps_g), p.cavity_loss));
  const cplx r = ledger_residual(l, "55b+");
  EXPECT_NEAR(r.real(), delta + (p.eps_5 - p.eps_g), 1e-14);
  EXPECT_EQ(r.imag(), p.cavity_loss);
  // c_5 uses the generalized convention, so its creator carries the same rate.
  EXPECT_EQ(ledger_residual(l, "55b-"), -r);
}

TEST(GaugeLedger, DeltaMuImaginaryPartIsCavityLoss) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const MicroscopicParams p = random_params(rng);
    EXPECT_EQ(build_gauge_ledger(p).delta_mu_eff().imag(), p.cavity_loss);
  }
}

TEST(GaugeLedger, GeneralizedConventionOnLeakyPhoton) {
  const GaugeLedger l = build_gauge_ledger(caption_params(), GaugeStage::kPhotonFrame);
  EXPECT_EQ(l.convention(GaugeMode::kPhotonE5), CreatorConvention::kGeneralized);
  EXPECT_EQ(l.convention(GaugeMode::kPhotonEG), CreatorConvention::kHermitian);
  EXPECT_EQ(l.stage(), GaugeStage::kPhotonFrame);
}

TEST(GaugeLedger, UnknownTermIsLookupError) {
  const GaugeLedger l = build_gauge_ledger(caption_params());
  EXPECT_THROW(ledger_residual(l, "g5+"), LookupError);
  EXPECT_THROW(parse_term(""), LookupError);
  for (const Term t : all_terms()) EXPECT_EQ(term_name(parse_term(term_name(t))), term_name(t));
}

TEST(GaugeLedger, ZeroResidualOverRandomDraws) {
  std::mt19937_64 rng(2024);
  int nonzero = 0;
  for (int k = 0; k < 1000; ++k) {
    const GaugeLedger l = reduce(random_params(rng)).ledger;
    for (const Term t : all_terms()) nonzero += ledger_residual(l, t) != cplx(0.0, 0.0);
  }
  EXPECT_EQ(nonzero, 0);
}

TEST(ExactSum, CancellationIsExact) {
  ExactSum s;
  s.add(0.1).add(0.2).add(-0.3);
  ExactSum t = ExactSum(0.1) + ExactSum(0.2) - ExactSum(0.3);
  EXPECT_NE(0.1 + 0.2 - 0.3, 0.0);
  EXPECT_EQ((s - t).value(), 0.0);
  EXPECT_TRUE((s - t).is_zero());
  ExactSum big(1e300);
  big.add(1.0).add(-1e300);
  EXPECT_EQ(big.value(), 1.0);
}

TEST(Leads, DistributionAndKeldyshFactor) {
  const Lead g = gibbs_lead(0.25, 0.3, 0.0);
  EXPECT_EQ(g.distribution(0.0), 1.0);
  EXPECT_EQ(g.distribution(1.0), 0.0);
  EXPECT_EQ(g.distribution(0.3), 0.5);
  const Lead f = flat_lead(0.25, 0.8);
  EXPECT_DOUBLE_EQ(f.keldysh_factor(-3.0), 1.0 - 1.6);
  EXPECT_THROW(gibbs_lead(-1.0, 0.0, 0.1), DomainError);
  EXPECT_THROW(flat_lead(0.1, 1.5), DomainError);
}

TEST(EffectiveModel, ValidateCatchesInconsistentDrain) {
  EffectiveParams p;
  EffectiveModel m = make_effective_model(p);
  EXPECT_NO_THROW(m.validate());
  m.eps_5 = {m.eps_5.real(), -0.5};
  EXPECT_THROW(m.validate(), DomainError);
}
