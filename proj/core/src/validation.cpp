#include "nrbridge/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "nrbridge/bridge.hpp"
#include "nrbridge/errors.hpp"
#include "nrbridge/lindblad.hpp"
#include "nrbridge/model.hpp"
#include "nrbridge/sweep.hpp"

namespace nrbridge {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Outcome {
  double measured = 0.0;
  std::string detail;
};

class Recorder {
 public:
  Recorder(ValidationReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

  void run(const std::string& name, double threshold, const std::function<Outcome()>& body) {
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    r.threshold = threshold;
    try {
      const Outcome o = body();
      r.measured = o.measured;
      r.detail = o.detail;
      r.passed = std::isfinite(o.measured) && o.measured <= threshold;
    } catch (const Error& err) {
      r.error = err.what();
      r.passed = false;
    }
    report_.checks.push_back(std::move(r));
  }

 private:
  ValidationReport& report_;
  std::string suite_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
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
  rho /= rho.trace();
  return DensityMatrix(rho);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

DensityMatrix truncated_coherent(int cutoff, cplx alpha) {
  Eigen::VectorXcd psi(cutoff + 1);
  cplx amp = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) amp *= alpha / std::sqrt(static_cast<double>(n));
    psi(n) = amp;
  }
  return DensityMatrix::pure(psi.normalized());
}

/// Single-particle correlations <c_i^+ c_j> of a many-body state.
MatrixC correlations(const HilbertSpace& hs, const std::vector<std::size_t>& modes,
                     const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  MatrixC c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      c(i, j) = expectation(hs.creator(modes[i]) * hs.annihilator(modes[j]), rho);
    }
  }
  return c;
}

/// Random quadratic chain of `n` fermions with loss and gain on each site.
struct QuadraticInstance {
  MatrixC h;
  VectorD loss;
  VectorD gain;
};

QuadraticInstance random_quadratic(Eigen::Index n, std::mt19937_64& rng) {
  QuadraticInstance q{MatrixC::Zero(n, n), VectorD::Zero(n), VectorD::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    q.h(i, i) = uniform(rng, -1.0, 1.0);
    q.loss(i) = uniform(rng, 0.1, 1.0);
    q.gain(i) = uniform(rng, 0.0, 0.6);
    if (i + 1 < n) {
      q.h(i + 1, i) = cplx(uniform(rng, 0.2, 1.0), uniform(rng, -0.5, 0.5));
      q.h(i, i + 1) = std::conj(q.h(i + 1, i));
    }
  }
  return q;
}

/// Many-body Hamiltonian and channels of a quadratic instance.
LindbladSystem many_body(const QuadraticInstance& q) {
  const auto n = static_cast<std::size_t>(q.h.rows());
  LindbladSystem sys{HilbertSpace(std::vector<Mode>(n, Mode::fermion())), {}, {}, 0, 1, 2,
                     std::nullopt, std::nullopt, 0.0};
  const auto d = sys.space.dimension();
  sys.hamiltonian = MatrixC::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    const MatrixC ci = sys.space.annihilator(i);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx hij = q.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (hij != 0.0) sys.hamiltonian += hij * ci.adjoint() * sys.space.annihilator(j);
    }
    sys.channels.push_back({ci, q.loss(static_cast<Eigen::Index>(i))});
    sys.channels.push_back({ci.adjoint(), q.gain(static_cast<Eigen::Index>(i))});
  }
  return sys;
}

/// Lambda system with a leaky photon mode and no leads.
LindbladSystem lambda_without_leads(int cutoff) {
  BridgeInstance inst;
  inst.regime = BridgeRegime::kAdiabatic;
  inst.t_eg = {0.5, 0.0};
  inst.t_e5 = {1.0, 0.0};
  inst.cavity_loss = 5.0;
  inst.left.gamma = 0.0;
  inst.right.gamma = 0.0;
  LindbladSystem sys = build_full_lindblad(inst, cutoff);
  std::erase_if(sys.channels, [](const JumpChannel& ch) { return ch.rate == 0.0; });
  return sys;
}

// ---------------------------------------------------------------------------

void lindblad_suite(Recorder& rec, const ValidationOptions& opt) {
  std::mt19937_64 rng(opt.seed);

  {
    // Photon decay with L = a, gamma = 2 from |1><1|.
    const HilbertSpace hs({Mode::boson(8)});
    const MatrixC a = hs.annihilator(0);
    const std::vector<JumpChannel> ch{{a, 2.0}};
    const MatrixC h = MatrixC::Zero(hs.dimension(), hs.dimension());
    double ratio_err = 0.0, trace_drift = 0.0, min_eig = 0.0;
    bool ran = false;
    std::string failure;
    try {
      DensityMatrix rho = DensityMatrix::basis_state(hs.dimension(), 1);
      double t0 = 0.0;
      for (double t : {0.25, 0.5, 1.0}) {
        rho = evolve(rho, h, ch, t - t0, 1e-3, [&](double, const DensityMatrix& r) {
          trace_drift = std::max(trace_drift, std::abs(r.trace() - 1.0));
          min_eig = std::min(min_eig, r.min_eigenvalue());
        });
        t0 = t;
        ratio_err = std::max(ratio_err, std::abs(expectation(hs.number(0), rho).real() - std::exp(-2.0 * t)));
      }
      ran = true;
    } catch (const Error& err) {
      failure = err.what();
    }
    const auto report = [&](const std::string& name, double threshold, double value, std::string detail) {
      rec.run(name, threshold, [&]() -> Outcome {
        if (!ran) throw DivergenceError(failure, 0);
        return {value, std::move(detail)};
      });
    };
    report("photon_decay", 1e-6, ratio_err, "max |<n>(t)/<n>(0) - exp(-2t)| at t = 0.25, 0.5, 1");
    report("trace_preservation", 1e-10, trace_drift, "max |Tr rho - 1| along the trajectory");
    report("positivity", 1e-10, std::max(0.0, -min_eig), "max(0, -min eigenvalue) along the trajectory");
  }

  rec.run("spontaneous_emission", 1e-6, [] {
    const HilbertSpace hs({Mode::fermion()});
    const double gamma = 1.3;
    const std::vector<JumpChannel> ch{{hs.annihilator(0), gamma}};
    const MatrixC h = 0.7 * hs.number(0);
    const DensityMatrix rho = evolve(DensityMatrix::basis_state(2, 1), h, ch, 1.0, 1e-3);
    return Outcome{std::abs(rho.matrix()(1, 1).real() - std::exp(-gamma)), "rho_ee(1) vs exp(-gamma)"};
  });

  rec.run("unitary_conservation", 1e-8, [&] {
    const HilbertSpace hs({Mode::fermion(), Mode::fermion(), Mode::fermion()});
    const MatrixC h = random_hermitian(hs.dimension(), rng);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(hs.dimension());
    const DensityMatrix rho0 = DensityMatrix::pure(psi.normalized());
    double drift = 0.0;
    evolve(rho0, h, {}, 2.0, 0.0, [&](double, const DensityMatrix& r) {
      drift = std::max({drift, std::abs(r.trace() - 1.0), std::abs(r.purity() - 1.0)});
    });
    return Outcome{drift, "max trace and purity drift, random H, no channels"};
  });

  rec.run("coherent_amplitude_drift", 1e-12, [] {
    const HilbertSpace hs({Mode::boson(8)});
    const MatrixC a = hs.annihilator(0);
    const double gamma = 1.7;
    const DensityMatrix rho = truncated_coherent(8, {0.4, 0.3});
    const MatrixC drho = liouvillian_apply(MatrixC::Zero(9, 9), {{a, gamma}}, rho.matrix());
    const cplx lhs = (a * drho).trace();
    const cplx rhs = -0.5 * gamma * expectation(a, rho);
    return Outcome{std::abs(lhs - rhs), "d<a>/dt vs -(gamma/2)<a> on a coherent state"};
  });

  rec.run("vacuum_steady_state", 1e-10, [] {
    const HilbertSpace hs({Mode::boson(6)});
    const MatrixC a = hs.annihilator(0);
    const DensityMatrix rho = steady_state(2.0 * hs.number(0), {{a, 0.8}});
    return Outcome{(rho.matrix() - hs.projector({0})).norm(), "distance from |0><0|"};
  });

  rec.run("rate_balance", 1e-12, [] {
    const HilbertSpace hs({Mode::fermion()});
    const MatrixC c = hs.annihilator(0);
    const double down = 0.9, up = 0.35;
    const DensityMatrix rho = steady_state(0.3 * hs.number(0), {{c, down}, {c.adjoint(), up}});
    return Outcome{std::abs(expectation(hs.number(0), rho).real() - up / (up + down)),
                   "n_ss vs gain / (gain + loss)"};
  });

  rec.run("lambda_atoms_lost", 1e-10, [] {
    const LindbladSystem sys = lambda_without_leads(2);
    const DensityMatrix rho = steady_state(sys.hamiltonian, sys.channels);
    return Outcome{std::abs(expectation(sys.space.fermion_number(), rho)),
                   "atom number of the steady state without leads"};
  });

  rec.run("steady_state_paths_agree", 1e-8, [&] {
    const LindbladSystem sys = many_body(random_quadratic(3, rng));
    const DensityMatrix dense = steady_state(sys.hamiltonian, sys.channels);
    SteadyStateOptions sparse_only;
    sparse_only.dense_limit = 0;
    const DensityMatrix sparse = steady_state(sys.hamiltonian, sys.channels, sparse_only);
    const RelaxationResult relaxed = relax_to_steady_state(
        DensityMatrix::basis_state(sys.space.dimension(), 0), sys.hamiltonian, sys.channels, 1e-11);
    const double d1 = (dense.matrix() - sparse.matrix()).norm();
    const double d2 = (dense.matrix() - relaxed.rho.matrix()).norm();
    return Outcome{std::max(d1, d2), "dense null space vs sparse LU " + fmt(d1) + ", vs time evolution " +
                                         fmt(d2) + " (t = " + fmt(relaxed.time) + ")"};
  });

  rec.run("commutant_drift", 1e-10, [&] {
    const HilbertSpace hs({Mode::fermion(), Mode::fermion(), Mode::boson(3)});
    const MatrixC a = hs.annihilator(2);
    const MatrixC id_b = MatrixC::Identity(4, 4);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      MatrixC atoms = random_hermitian(4, rng);
      MatrixC op(hs.dimension(), hs.dimension());
      for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) op.block(4 * i, 4 * j, 4, 4) = atoms(i, j) * id_b;
      }
      const MatrixC h = random_hermitian(hs.dimension(), rng);
      const std::vector<JumpChannel> ch{{a, uniform(rng, 0.1, 3.0)}};
      worst = std::max(worst, commutant_drift_check(op, h, ch, random_density(hs.dimension(), rng)));
    }
    return Outcome{worst, "100 random atom-sector observables against photon loss"};
  });

  rec.run("leap_expectation_lambda", 1e-8, [] {
    const LindbladSystem sys = lambda_without_leads(4);
    std::vector<DensityMatrix> trajectory;
    const DensityMatrix rho0(sys.space.projector({1, 0, 0, 0}));
    int step = 0;
    evolve(rho0, sys.hamiltonian, sys.channels, 2.0, 0.0, [&](double, const DensityMatrix& r) {
      if (step++ % 10 == 0) trajectory.push_back(r);
    });
    return Outcome{leap_expectation_check(*sys.photon_channel, sys.hamiltonian, sys.channels, trajectory),
                   "photon leap operator along a drive-and-decay trajectory"};
  });

  rec.run("complex_photon_frequency", 1e-6, [] {
    const HilbertSpace hs({Mode::boson(8)});
    const MatrixC a = hs.annihilator(0);
    const DensityMatrix rho0 = truncated_coherent(8, {0.3, 0.0});
    const DensityMatrix rho = evolve(rho0, 5.0 * hs.number(0), {{a, 2.0}}, 1.0, 1e-3);
    const cplx ratio = expectation(a, rho) / expectation(a, rho0);
    return Outcome{std::abs(ratio - std::exp(cplx(-1.0, -5.0))), "<a>(1)/<a>(0) vs exp(-5i - 1)"};
  });

  rec.run("lyapunov_oracle", 1e-8, [&] {
    double worst = 0.0;
    for (Eigen::Index n : {2, 3, 3, 4, 5}) {
      const QuadraticInstance q = random_quadratic(n, rng);
      const LindbladSystem sys = many_body(q);
      std::vector<std::size_t> modes(static_cast<std::size_t>(n));
      for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = k;
      const MatrixC dense = correlations(sys.space, modes, steady_state(sys.hamiltonian, sys.channels));
      worst = std::max(worst, (dense - quadratic_steady_state(q.h, q.loss, q.gain)).cwiseAbs().maxCoeff());
    }
    return Outcome{worst, "max |C_dense - C_lyapunov| over 5 random chains (2 to 5 modes)"};
  });

  rec.run("anticommutation", 1e-14, [] {
    const HilbertSpace hs({Mode::fermion(), Mode::fermion(), Mode::fermion(), Mode::boson(2)});
    const MatrixC id = hs.identity();
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const MatrixC ci = hs.annihilator(i);
        const MatrixC cj = hs.annihilator(j);
        const MatrixC anti = ci * cj.adjoint() + cj.adjoint() * ci;
        worst = std::max(worst, (anti - (i == j ? id : MatrixC::Zero(id.rows(), id.cols()))).norm());
        worst = std::max(worst, (ci * cj + cj * ci).norm());
      }
    }
    return Outcome{worst, "{c_i, c_j^+} = delta_ij and {c_i, c_j} = 0"};
  });
}

// ---------------------------------------------------------------------------

EffectiveModel caption_model(double gamma, double e_nh, double delta_mu) {
  return sweep_point_model(SweepModel{}, gamma, e_nh, delta_mu);
}

void keldysh_suite(Recorder& rec, const ValidationOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  const SolverOptions& so = opt.solver;

  rec.run("advanced_adjoint", 1e-12, [] {
    const EffectiveModel m = caption_model(1.0, 2.0, 1.0);
    double worst = 0.0;
    for (double w : make_grid(m).nodes()) {
      const GreensPair g = greens(w, m);
      Matrix3c inv = w * Matrix3c::Identity() - bare_hamiltonian(m);
      const SelfEnergySet s = SelfEnergySet::assemble(m, w);
      for (int j = 0; j < 3; ++j) inv(j, j) -= s.site[static_cast<std::size_t>(j)].advanced();
      const Matrix3c ga = inv.inverse();
      worst = std::max(worst, (ga - g.retarded.adjoint()).norm() / std::max(1.0, ga.norm()));
    }
    return Outcome{worst, "relative |[w - H0 - Sigma^A]^-1 - (G^R)^+| over all grid nodes"};
  });

  rec.run("spectral_sum_rule", 1e-3, [] {
    const EffectiveModel m = caption_model(1.0, 2.0, 1.0);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
      const auto q = integrate(
          [&](double w) { return -2.0 * greens(w, m).retarded(j, j).imag() / (2.0 * std::numbers::pi); },
          make_grid(m));
      worst = std::max(worst, std::abs(q.value - 1.0));
    }
    return Outcome{worst, "max_j |integral of A_jj dw/2pi - 1|"};
  });

  rec.run("lesser_positivity", 1e-10, [] {
    double worst = 0.0;
    for (double e_nh : {1.0, 4.0}) {
      const EffectiveModel m = caption_model(3.0, e_nh, 4.0);
      for (double w : make_grid(m).nodes()) {
        const Matrix3c gl = greens(w, m).lesser();
        for (int j = 0; j < 3; ++j) worst = std::max(worst, (kI * gl(j, j)).real());
      }
    }
    return Outcome{worst, "max(0, -(-i G^<_jj)) over all grid nodes"};
  });

  std::vector<SteadyState> random_states;
  rec.run("continuity", kContinuityTolerance, [&] {
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
      const SteadyState s = solve(sweep_point_model(sm, gamma, enh[k % 4], dmu[(k / 4) % 4]), so);
      random_states.push_back(s);
      worst = std::max(worst, std::abs(s.continuity_residual()) / std::max(1.0, s.loss_current));
    }
    return Outcome{worst, "|I_L + I_R - I_loss| / max(1, I_loss) over 100 random points"};
  });

  rec.run("loss_nonnegative", 1e-12, [&] {
    double worst = 0.0;
    for (const auto& s : random_states) worst = std::max(worst, -s.loss_current);
    if (random_states.empty()) throw AccuracyError("no solved points to inspect");
    return Outcome{worst, "max(0, -I_loss) over the continuity points"};
  });

  rec.run("mirror_symmetry", 1e-8, [&] {
    SweepModel sm;
    sm.eps_g = 0.2;
    const SteadyState s = solve(sweep_point_model(sm, 0.7, 2.0, 0.0), so);
    return Outcome{std::abs(s.current_left - s.current_right), "|I_L - I_R| with identical leads"};
  });

  rec.run("lorentzian_occupation", 1e-6, [&] {
    double worst = 0.0;
    const double eps0 = 0.3, gamma = 0.25;
    for (double mu : {-1.0, -0.2, 0.3, 0.5, 2.0}) {
      EffectiveParams p;
      p.eps_g = eps0;
      p.t_eg = {0.0, 0.0};
      p.left = gibbs_lead(gamma, mu, 0.0);
      p.right = gibbs_lead(0.0, mu, 0.0);
      const double n = solve(make_effective_model(p), so).occupations[0];
      worst = std::max(worst, std::abs(n - (0.5 + std::atan((mu - eps0) / gamma) / std::numbers::pi)));
    }
    return Outcome{worst, "isolated site at T = 0 vs 1/2 + arctan((mu - eps)/Gamma)/pi"};
  });

  rec.run("half_filling", 1e-6, [&] {
    const double n = solve(caption_model(0.0, 1.0, 0.0), so).occupations[0];
    return Outcome{std::abs(n - 0.5), "n_g at the particle-hole symmetric point without drive"};
  });

  rec.run("markov_no_injection", 0.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const SelfEnergy s = markov_self_energy(uniform(rng, 1e-3, 10.0), uniform(rng, 1.0, 10.0));
      worst = std::max(worst, std::abs(s.lesser()));
    }
    return Outcome{worst, "|Sigma^<| of the drain over 1000 random inputs"};
  });

  rec.run("gibbs_fluctuation_dissipation", 0.0, [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double g = uniform(rng, 0.0, 2.0), mu = uniform(rng, -2.0, 2.0);
      const double t = uniform(rng, 0.01, 1.0), w = uniform(rng, -5.0, 5.0);
      const SelfEnergy s = lead_self_energy(g, mu, t, w);
      const cplx expected = (s.retarded - s.advanced()) * std::tanh((w - mu) / (2.0 * t));
      // Compared with == so that no fused multiply-subtract skips the rounding of `expected`.
      if (s.keldysh != expected) worst = std::max(worst, std::abs(s.keldysh - expected));
    }
    return Outcome{worst, "|Sigma^K - (Sigma^R - Sigma^A) tanh((w - mu)/2T)| over 1000 draws"};
  });

  rec.run("reciprocal_oracle", 1e-6, [&] {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      BridgeInstance inst;
      inst.eps_g = uniform(rng, -0.5, 0.5);
      inst.detuning = uniform(rng, -0.5, 0.5);
      inst.t_eg = {uniform(rng, 0.1, 1.5), 0.0};
      inst.t_e5 = {uniform(rng, 0.3, 1.5), 0.0};
      inst.left = {uniform(rng, 0.05, 0.5), uniform(rng, 0.0, 1.0)};
      inst.right = {uniform(rng, 0.05, 0.5), uniform(rng, 0.0, 1.0)};
      const SteadyState s = solve(effective_counterpart(inst), so);
      const MatrixC c = quadratic_correlations(inst);
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(s.occupations[static_cast<std::size_t>(j)] - c(j, j).real()));
      const double lyap_loss = 2.0 * inst.gamma_5 * c(2, 2).real();
      worst = std::max(worst, std::abs(s.loss_current - lyap_loss) / std::max(1e-12, lyap_loss));
    }
    return Outcome{worst, "keldysh vs correlation-matrix oracle at e_nh = 1, 5 random flat-lead instances"};
  });

  // Caption sweep shared by the curve-shape checks.
  SweepConfig cfg;
  cfg.solver = so;
  std::optional<SweepResult> sweep;
  const auto caption_sweep = [&]() -> const SweepResult& {
    if (!sweep) sweep = run_sweep(cfg, 1);
    return *sweep;
  };

  rec.run("zeno_single_peak", 0.0, [&] {
    const SweepResult& r = caption_sweep();
    int bad = 0;
    std::string detail;
    for (double e : cfg.e_nh) {
      for (double d : cfg.delta_mu) {
        const auto curve = r.curve(e, d);
        int maxima = 0;
        for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
          if (curve[k].loss_current > curve[k - 1].loss_current &&
              curve[k].loss_current > curve[k + 1].loss_current) {
            ++maxima;
          }
        }
        if (maxima != 1) ++bad;
        detail += "(" + fmt(e) + "," + fmt(d) + "):" + std::to_string(maxima) + " ";
      }
    }
    return Outcome{static_cast<double>(bad), "interior maxima per (e_nh, delta_mu) curve " + detail};
  });

  rec.run("small_drive_monotone", 0.0, [&] {
    const SweepResult& r = caption_sweep();
    int violations = 0;
    for (double e : cfg.e_nh) {
      for (double d : cfg.delta_mu) {
        const auto curve = r.curve(e, d);
        for (std::size_t k = 1; k < curve.size() && curve[k].gamma < 0.1; ++k) {
          if (!(curve[k].loss_current > curve[k - 1].loss_current)) ++violations;
        }
      }
    }
    return Outcome{static_cast<double>(violations), "non-increasing steps of I_loss for gamma < 0.1"};
  });

  rec.run("delta_mu_collapse", 1e-6, [&] {
    const SweepResult& r = caption_sweep();
    const auto ref = r.curve(1.0, 0.0);
    double worst = 0.0;
    for (double d : {1.0, 4.0}) {
      const auto c = r.curve(1.0, d);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        worst = std::max(worst, std::abs(c[k].loss_current - ref[k].loss_current) / ref[k].loss_current);
      }
    }
    return Outcome{worst, "max relative spread of e_nh = 1 curves over delta_mu in {0, 1, 4}"};
  });

  // At eps_g = detuning = 0 with mirror leads the chain is bipartite and all
  // self-energies are purely imaginary, so I_loss cannot depend on delta_mu
  // for any e_nh.
  rec.run("delta_mu_independence", 1e-6, [&] {
    const SweepResult& r = caption_sweep();
    double worst = 0.0;
    for (double e : cfg.e_nh) {
      const auto ref = r.curve(e, 0.0);
      for (double d : cfg.delta_mu) {
        const auto c = r.curve(e, d);
        for (std::size_t k = 0; k < ref.size(); ++k) {
          worst = std::max(worst, std::abs(c[k].loss_current - ref[k].loss_current) / ref[k].loss_current);
        }
      }
    }
    return Outcome{worst, "max relative spread over delta_mu, every e_nh, symmetric point"};
  });
}

// ---------------------------------------------------------------------------

BridgeInstance adiabatic_base(int cutoff) {
  BridgeInstance inst;
  inst.regime = BridgeRegime::kAdiabatic;
  inst.t_eg = {0.5, 0.0};
  inst.t_e5 = {1.0, 0.0};
  inst.gamma_5 = 1.0;
  inst.cavity_loss = 5.0;
  inst.fock_cutoff = cutoff;
  return inst;
}

void bridge_suite(Recorder& rec, const ValidationOptions& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  BridgeOptions bopt;
  bopt.solver = opt.solver;

  rec.run("gauge_ledger_zero_residual", 0.0, [&] {
    int nonzero = 0;
    for (int k = 0; k < 1000; ++k) {
      MicroscopicParams p;
      p.eps_g = uniform(rng, -5.0, 5.0);
      p.eps_5 = p.eps_g + uniform(rng, 0.1, 10.0);
      p.eps_e = p.eps_5 + uniform(rng, 0.1, 10.0);
      p.omega_eg = p.eps_e - p.eps_g + uniform(rng, -1.0, 1.0);
      p.cavity_loss = uniform(rng, 0.0, 10.0);
      p.t_bath = {uniform(rng, 0.1, 2.0), uniform(rng, -1.0, 1.0)};
      p.t_e5_eff = cplx(uniform(rng, 0.1, 2.0), 0.0);
      const ReducedModel r = reduce(p);
      for (const Term t : all_terms()) {
        if (ledger_residual(r.ledger, t) != cplx(0.0, 0.0)) ++nonzero;
      }
    }
    return Outcome{static_cast<double>(nonzero), "nonzero residual exponents over 1000 draws x 6 terms"};
  });

  rec.run("exact_quadratic_agreement", bopt.exact_tolerance, [&] {
    double worst = 0.0;
    std::vector<BridgeInstance> cases(4);
    cases[1].cavity_loss = 1.0;
    for (std::size_t k = 2; k < cases.size(); ++k) {
      cases[k].eps_g = uniform(rng, -0.5, 0.5);
      cases[k].detuning = uniform(rng, -0.5, 0.5);
      cases[k].t_eg = {uniform(rng, 0.1, 1.5), 0.0};
      cases[k].cavity_loss = uniform(rng, 0.0, 3.0);
      cases[k].left = {uniform(rng, 0.05, 0.5), uniform(rng, 0.0, 1.0)};
      cases[k].right = {uniform(rng, 0.05, 0.5), uniform(rng, 0.0, 1.0)};
    }
    for (const auto& inst : cases) {
      const BridgeReport r = compare(inst, bopt);
      worst = std::max({worst, r.relative_deviation, r.occupation_deviation});
    }
    return Outcome{worst, "Lindblad, correlation-matrix and Keldysh paths, 4 instances"};
  });

  rec.run("zero_drive", 1e-12, [&] {
    BridgeInstance inst;
    inst.t_eg = {0.0, 0.0};
    const BridgeReport r = compare(inst, bopt);
    return Outcome{std::max(std::abs(r.loss_lindblad), std::abs(r.loss_keldysh)), "I_loss of both paths"};
  });

  std::optional<LadderReport> ladder;
  const double ratios[] = {5.0, 10.0, 20.0};
  const auto run_ladder = [&]() -> const LadderReport& {
    if (!ladder) ladder = compare_ladder(adiabatic_base(opt.fock_cutoff), ratios, bopt);
    return *ladder;
  };

  rec.run("adiabatic_agreement", bopt.adiabatic_tolerance, [&] {
    const LadderReport& l = run_ladder();
    double worst = 0.0;
    std::string detail = "relative deviations";
    for (const auto& r : l.reports) {
      worst = std::max(worst, r.relative_deviation);
      detail += " " + fmt(r.relative_deviation);
    }
    return Outcome{worst, detail + " at Gamma_e5 / max coupling = 5, 10, 20"};
  });

  rec.run("adiabatic_monotone", 0.0, [&] {
    return Outcome{run_ladder().strictly_decreasing ? 0.0 : 1.0, "1 when the ladder is not strictly decreasing"};
  });

  rec.run("fock_cutoff_converged", bopt.cutoff_tolerance, [&] {
    double worst = 0.0;
    for (const auto& r : run_ladder().reports) worst = std::max(worst, r.cutoff_shift);
    return Outcome{worst, "relative loss-current shift on doubling the cutoff"};
  });

  rec.run("photon_population", 0.05, [&] {
    return Outcome{run_ladder().reports[1].photon_number, "<a^+ a> at Gamma_e5 = 10, lambda_e5 = 1"};
  });

  rec.run("atom_number_balance", 1e-8, [&] {
    double worst = 0.0;
    for (const auto& r : run_ladder().reports) worst = std::max(worst, r.atom_balance_residual);
    return Outcome{worst, "|d<N_atoms>/dt| at the Lindblad steady state"};
  });

  rec.run("photon_loss_commutant", 1e-10, [&] {
    const LindbladSystem sys = build_full_lindblad(adiabatic_base(std::min(opt.fock_cutoff, 4)));
    const std::vector<JumpChannel> photon_only{sys.channels[*sys.photon_channel]};
    const DensityMatrix rho = random_density(sys.space.dimension(), rng);
    return Outcome{commutant_drift_check(sys.space.fermion_number(), sys.hamiltonian, photon_only, rho),
                   "atom number against the photon-loss channel alone"};
  });
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

bool ValidationReport::has_errors() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.error.has_value(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lindblad", "keldysh", "bridge", "all"};
  return names;
}

ValidationReport run_validation(std::string_view suite, const ValidationOptions& options) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw LookupError("unknown validation suite '" + std::string(suite) + "'");
  }
  ValidationReport report;
  const bool all = suite == "all";
  if (all || suite == "lindblad") {
    Recorder rec(report, "lindblad");
    lindblad_suite(rec, options);
  }
  if (all || suite == "keldysh") {
    Recorder rec(report, "keldysh");
    keldysh_suite(rec, options);
  }
  if (all || suite == "bridge") {
    Recorder rec(report, "bridge");
    bridge_suite(rec, options);
  }
  return report;
}

}  // namespace nrbridge
