// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nrbridge/bridge.hpp"
#include "nrbridge/errors.hpp"
#include "nrbridge/lindblad.hpp"
#include "nrbridge/model.hpp"
#include "nrbridge/sweep.hpp"

using namespace nrbridge;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MatrixC random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  MatrixC m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {n01(rng), n01(rng)};
  }
  return 0.5 * (m + m.adjoint());
}

DensityMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  MatrixC g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = {n01(rng), n01(rng)};
  }
  MatrixC rho = g * g.adjoint();
  return DensityMatrix(rho / rho.trace());
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Lindblad engine sanity.
Verdict photon_decay() {
  const HilbertSpace hs({Mode::boson(8)});
  const std::vector<JumpChannel> ch{{hs.annihilator(0), 2.0}};
  const MatrixC h = MatrixC::Zero(hs.dimension(), hs.dimension());
  DensityMatrix rho = DensityMatrix::basis_state(hs.dimension(), 3);
  const double n0 = 3.0;
  double ratio_err = 0.0, drift = 0.0, min_eig = 0.0, t0 = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    rho = evolve(rho, h, ch, t - t0, 1e-3, [&](double, const DensityMatrix& r) {
      drift = std::max(drift, std::abs(r.trace() - 1.0));
      min_eig = std::min(min_eig, r.min_eigenvalue());
    });
    t0 = t;
    ratio_err = std::max(ratio_err, std::abs(expectation(hs.number(0), rho).real() / n0 - std::exp(-2.0 * t)));
  }
  return {ratio_err <= 1e-6 && drift <= 1e-10 && min_eig >= -1e-10,
          "ratio error " + sci(ratio_err) + ", trace drift " + sci(drift) + ", min eigenvalue " + sci(min_eig)};
}

// Expectation-value lemmas.
Verdict expectation_lemmas() {
  std::mt19937_64 rng(101);
  const HilbertSpace hs({Mode::fermion(), Mode::fermion(), Mode::boson(3)});
  const MatrixC a = hs.annihilator(2);
  const MatrixC id_b = MatrixC::Identity(4, 4);
  double drift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixC atoms = random_hermitian(4, rng);
    MatrixC op(hs.dimension(), hs.dimension());
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) op.block(4 * i, 4 * j, 4, 4) = atoms(i, j) * id_b;
    }
    const std::vector<JumpChannel> ch{{a, uniform(rng, 0.1, 3.0)}};
    drift = std::max(drift, commutant_drift_check(op, random_hermitian(hs.dimension(), rng), ch,
                                                  random_density(hs.dimension(), rng)));
  }

  BridgeInstance inst;
  inst.regime = BridgeRegime::kAdiabatic;
  inst.t_eg = {0.5, 0.0};
  inst.t_e5 = {1.0, 0.0};
  inst.cavity_loss = 5.0;
  inst.left.gamma = 0.0;
  inst.right.gamma = 0.0;
  LindbladSystem sys = build_full_lindblad(inst, 4);
  std::erase_if(sys.channels, [](const JumpChannel& c) { return c.rate == 0.0; });
  std::size_t photon = 0;
  for (std::size_t k = 0; k < sys.channels.size(); ++k) {
    if (sys.channels[k].rate == 2.0 * inst.cavity_loss) photon = k;
  }
  std::vector<DensityMatrix> trajectory;
  int step = 0;
  evolve(DensityMatrix(sys.space.projector({1, 0, 0, 0})), sys.hamiltonian, sys.channels, 2.0, 0.0,
         [&](double, const DensityMatrix& r) {
           if (step++ % 10 == 0) trajectory.push_back(r);
         });
  const double leap = leap_expectation_check(photon, sys.hamiltonian, sys.channels, trajectory);
  return {drift <= 1e-10 && leap <= 1e-8, "commutant drift " + sci(drift) + ", leap residual " + sci(leap)};
}

// Oracle equivalence on flat-lead quadratic instances at e_nh = 1.
Verdict oracle_equivalence() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    BridgeInstance inst;
    inst.eps_g = uniform(rng, -0.5, 0.5);
    inst.detuning = uniform(rng, -0.5, 0.5);
    inst.t_eg = {uniform(rng, 0.1, 1.0), uniform(rng, -0.3, 0.3)};
    inst.t_e5 = {uniform(rng, 0.3, 1.5), 0.0};
    inst.gamma_5 = uniform(rng, 0.3, 2.0);
    inst.left = {uniform(rng, 0.05, 0.6), uniform(rng, 0.0, 1.0)};
    inst.right = {uniform(rng, 0.05, 0.6), uniform(rng, 0.0, 1.0)};
    const BridgeReport r = compare(inst);
    worst = std::max({worst, r.occupation_deviation, std::abs(*r.loss_lyapunov - r.loss_lindblad),
                      std::abs(r.loss_keldysh - r.loss_lindblad)});
  }
  return {worst <= 1e-6, "max pairwise deviation over 20 instances " + sci(worst)};
}

// Current continuity over a random grid.
Verdict continuity() {
  std::mt19937_64 rng(404);
  const double enh[] = {1.0, 1.5, 2.0, 4.0};
  const double dmu[] = {0.0, 1.0, 4.0, 1000.0};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    SweepModel sm;
    sm.eps_g = uniform(rng, -0.5, 0.5);
    sm.detuning = uniform(rng, -0.5, 0.5);
    sm.t_left = uniform(rng, 0.2, 1.0);
    sm.t_right = uniform(rng, 0.2, 1.0);
    sm.t_e5 = uniform(rng, 0.3, 1.5);
    sm.temperature = uniform(rng, 0.02, 0.5);
    const double gamma = std::pow(10.0, uniform(rng, -3.0, 3.0));
    const SteadyState s = solve(sweep_point_model(sm, gamma, enh[k % 4], dmu[(k / 4) % 4]));
    worst = std::max(worst, std::abs(s.continuity_residual()) / std::max(1.0, s.loss_current));
  }
  return {worst <= 1e-8, "max relative residual " + sci(worst)};
}

// Loss-current curves at the caption parameters, shared by the sweep criteria.
class CaptionCurves {
 public:
  const std::vector<SweepRecord>& curve(double e_nh, double delta_mu) {
    const auto key = std::make_pair(e_nh, delta_mu);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      SweepConfig cfg;
      cfg.gamma = {1e-3, 1e3, 33};
      cfg.e_nh = {e_nh};
      cfg.delta_mu = {delta_mu};
      it = cache_.emplace(key, run_sweep(cfg, 0).records).first;
    }
    return it->second;
  }

 private:
  std::map<std::pair<double, double>, std::vector<SweepRecord>> cache_;
};

Verdict single_interior_maximum(CaptionCurves& curves) {
  std::string detail;
  bool ok = true;
  for (double e : {1.0, 2.0, 4.0}) {
    for (double d : {0.0, 1.0, 4.0}) {
      const auto& c = curves.curve(e, d);
      int maxima = 0;
      for (std::size_t k = 1; k + 1 < c.size(); ++k) {
        maxima += c[k].loss_current > c[k - 1].loss_current && c[k].loss_current > c[k + 1].loss_current;
      }
      const bool edge = c.front().loss_current >= c[1].loss_current ||
                        c.back().loss_current >= c[c.size() - 2].loss_current;
      if (maxima != 1 || edge) {
        ok = false;
        detail += " (e_nh " + sci(e) + ", dmu " + sci(d) + ": " + std::to_string(maxima) + " maxima)";
      }
    }
  }
  return {ok, ok ? "9 curves, one interior maximum each" : "failing curves:" + detail};
}

Verdict bias_collapse(CaptionCurves& curves) {
  const auto& ref = curves.curve(1.0, 0.0);
  double worst = 0.0;
  for (double d : {1.0, 4.0}) {
    const auto& c = curves.curve(1.0, d);
    for (std::size_t k = 0; k < c.size(); ++k) {
      worst = std::max(worst, std::abs(c[k].loss_current - ref[k].loss_current) / ref[k].loss_current);
    }
  }
  return {worst <= 1e-6, "max relative spread " + sci(worst)};
}

// A distance comparison counts only when it is resolved above the
// integration error of the three curves involved.
Verdict crossover(CaptionCurves& curves) {
  const auto& zero = curves.curve(2.0, 0.0);
  const auto& proxy = curves.curve(2.0, 1000.0);
  std::string detail;
  bool ok = true;
  for (double d : {1.0, 4.0}) {
    const auto& c = curves.curve(2.0, d);
    for (std::size_t k : {std::size_t{0}, c.size() - 1}) {
      const double to_proxy = std::abs(c[k].loss_current - proxy[k].loss_current);
      const double to_zero = std::abs(c[k].loss_current - zero[k].loss_current);
      const double resolution = 2.0 * (c[k].grid_error + proxy[k].grid_error + zero[k].grid_error) +
                                1e-12 * c[k].loss_current;
      const bool want_proxy_closer = k == 0;
      const double margin = want_proxy_closer ? to_zero - to_proxy : to_proxy - to_zero;
      const bool resolved = margin > resolution;
      ok = ok && resolved;
      detail += " dmu " + sci(d) + " gamma " + sci(c[k].gamma) + ": margin " + sci(margin) + " vs resolution " +
                sci(resolution) + (resolved ? "" : " (unresolved)") + ";";
    }
  }
  return {ok, detail};
}

Verdict bridge_agreement() {
  std::mt19937_64 rng(808);
  double exact = 0.0;
  for (int k = 0; k < 6; ++k) {
    BridgeInstance inst;
    inst.eps_g = uniform(rng, -0.5, 0.5);
    inst.detuning = uniform(rng, -0.5, 0.5);
    inst.t_eg = {uniform(rng, 0.1, 1.0), 0.0};
    inst.t_e5 = {uniform(rng, 0.3, 1.5), 0.0};
    inst.cavity_loss = uniform(rng, 0.0, 3.0);
    inst.left = {uniform(rng, 0.05, 0.6), uniform(rng, 0.0, 1.0)};
    inst.right = {uniform(rng, 0.05, 0.6), uniform(rng, 0.0, 1.0)};
    exact = std::max(exact, compare(inst).relative_deviation);
  }
  BridgeInstance base;
  base.regime = BridgeRegime::kAdiabatic;
  base.t_eg = {0.5, 0.0};
  base.t_e5 = {1.0, 0.0};
  base.fock_cutoff = 8;
  const double ratios[] = {5.0, 10.0, 20.0};
  const LadderReport ladder = compare_ladder(base, ratios);
  double worst_adiabatic = 0.0;
  std::string devs;
  for (const auto& r : ladder.reports) {
    worst_adiabatic = std::max(worst_adiabatic, r.relative_deviation);
    devs += " " + sci(r.relative_deviation);
  }
  return {exact <= 1e-6 && worst_adiabatic <= 5e-2 && ladder.strictly_decreasing,
          "exact " + sci(exact) + ", ladder" + devs + (ladder.strictly_decreasing ? "" : " (not decreasing)")};
}

Verdict gauge_ledger() {
  std::mt19937_64 rng(909);
  int nonzero = 0;
  for (int k = 0; k < 1000; ++k) {
    MicroscopicParams p;
    p.eps_g = uniform(rng, -5.0, 5.0);
    p.eps_5 = p.eps_g + uniform(rng, 0.01, 10.0);
    p.eps_e = p.eps_5 + uniform(rng, 0.01, 10.0);
    p.omega_eg = p.eps_e - p.eps_g + uniform(rng, -0.5, 0.5);
    p.cavity_loss = uniform(rng, 0.0, 10.0);
    p.lambda_eg = {uniform(rng, 0.0, 1.0), uniform(rng, -0.5, 0.5)};
    p.alpha_eg = {uniform(rng, 0.0, 3.0), 0.0};
    p.t_bath = {uniform(rng, 0.1, 1.1), 0.0};
    p.t_e5_eff = cplx(uniform(rng, 0.1, 1.1), 0.0);
    const GaugeLedger l = build_gauge_ledger(p);
    for (const Term t : all_terms()) nonzero += ledger_residual(l, t) != cplx(0.0, 0.0);
  }
  return {nonzero == 0, std::to_string(nonzero) + " nonzero residuals over 1000 draws"};
}

}  // namespace

int main() {
  CaptionCurves curves;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"lindblad engine sanity", photon_decay},
      {"expectation-value lemmas", expectation_lemmas},
      {"oracle equivalence", oracle_equivalence},
      {"current continuity", continuity},
      {"single interior maximum", [&] { return single_interior_maximum(curves); }},
      {"bias collapse at e_nh = 1", [&] { return bias_collapse(curves); }},
      {"crossover at e_nh = 2", [&] { return crossover(curves); }},
      {"bridge agreement", bridge_agreement},
      {"gauge ledger", gauge_ledger},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const Error& err) {
      v = {false, std::string("error: ") + err.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.passed;
    std::printf("%s %zu %s (%.1f s): %s\n", v.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
