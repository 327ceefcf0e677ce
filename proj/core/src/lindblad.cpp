#include "nrbridge/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

constexpr cplx kI{0.0, 1.0};

MatrixC kron(const MatrixC& a, const MatrixC& b) {
  MatrixC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_square(const MatrixC& m, Eigen::Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream os;
    os << what << " has shape " << m.rows() << "x" << m.cols() << ", expected " << d << "x" << d;
    throw DimensionError(os.str());
  }
}

void require_shapes(const MatrixC& h, const std::vector<JumpChannel>& channels, Eigen::Index d) {
  require_square(h, d, "Hamiltonian");
  for (const auto& ch : channels) {
    require_square(ch.op, d, "jump operator");
    if (!(ch.rate >= 0.0)) throw DomainError("jump rates must be >= 0");
  }
}

double row_sum_norm(const MatrixC& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Generator in the form -i(H_eff rho - rho H_eff^+) + sum_m g_m L_m rho L_m^+.
struct Generator {
  MatrixC heff;
  std::vector<std::pair<MatrixC, double>> jumps;

  Generator(const MatrixC& h, const std::vector<JumpChannel>& channels) : heff(h) {
    for (const auto& ch : channels) {
      if (ch.rate == 0.0) continue;
      heff -= (0.5 * ch.rate) * kI * (ch.op.adjoint() * ch.op);
      jumps.emplace_back(ch.op, ch.rate);
    }
  }

  MatrixC apply(const MatrixC& rho) const {
    MatrixC hr = heff * rho;
    MatrixC out = -kI * (hr - hr.adjoint());  // rho Hermitian: rho H_eff^+ = (H_eff rho)^+
    for (const auto& [op, rate] : jumps) out.noalias() += rate * (op * rho * op.adjoint());
    return out;
  }

  // Exact form, valid for non-Hermitian arguments (RK4 stages).
  MatrixC apply_general(const MatrixC& x) const {
    MatrixC out = -kI * (heff * x - x * heff.adjoint());
    for (const auto& [op, rate] : jumps) out.noalias() += rate * (op * x * op.adjoint());
    return out;
  }
};

double trace_norm_hermitian(const MatrixC& m) {
  const MatrixC herm = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<MatrixC> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double commutator_norm(const MatrixC& a, const MatrixC& b) { return (a * b - b * a).norm(); }

}  // namespace

HilbertSpace::HilbertSpace(std::vector<Mode> modes) : modes_(std::move(modes)) {
  for (auto& m : modes_) {
    if (m.kind == ModeKind::kFermion) m.cutoff = 1;
    if (m.cutoff < 1) throw DomainError("boson cutoff must be >= 1");
    dimension_ *= m.dimension();
  }
  if (dimension_ < 2) throw DomainError("Hilbert space dimension must be >= 2");
}

MatrixC HilbertSpace::annihilator(std::size_t mode) const {
  if (mode >= modes_.size()) throw LookupError("mode index out of range");
  MatrixC out = MatrixC::Identity(1, 1);
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    const Mode& m = modes_[k];
    const int d = m.dimension();
    MatrixC local = MatrixC::Identity(d, d);
    if (k == mode) {
      local.setZero();
      for (int n = 1; n < d; ++n) local(n - 1, n) = std::sqrt(static_cast<double>(n));
    } else if (k < mode && m.kind == ModeKind::kFermion &&
               modes_[mode].kind == ModeKind::kFermion) {
      local(1, 1) = -1.0;  // parity string
    }
    out = kron(out, local);
  }
  return out;
}

MatrixC HilbertSpace::number(std::size_t mode) const {
  const MatrixC a = annihilator(mode);
  return a.adjoint() * a;
}

MatrixC HilbertSpace::fermion_number() const {
  MatrixC n = MatrixC::Zero(dimension_, dimension_);
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].kind == ModeKind::kFermion) n += number(k);
  }
  return n;
}

MatrixC HilbertSpace::projector(const std::vector<int>& occupations) const {
  if (occupations.size() != modes_.size()) throw DimensionError("one occupation per mode required");
  Eigen::Index index = 0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] > modes_[k].cutoff) {
      throw DomainError("occupation outside the truncated Fock space");
    }
    index = index * modes_[k].dimension() + occupations[k];
  }
  MatrixC p = MatrixC::Zero(dimension_, dimension_);
  p(index, index) = 1.0;
  return p;
}

double DensityMatrix::hermiticity_defect() const { return (rho_ - rho_.adjoint()).norm(); }

double DensityMatrix::min_eigenvalue() const {
  const MatrixC herm = 0.5 * (rho_ + rho_.adjoint());
  const Eigen::SelfAdjointEigenSolver<MatrixC> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::check(double trace_tol, double eig_tol) const {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw DimensionError("density matrix must be square");
  if (hermiticity_defect() > 1e-12 * std::max(1.0, rho_.norm())) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > trace_tol) throw DomainError("density matrix trace differs from 1");
  if (min_eigenvalue() < -eig_tol) throw DomainError("density matrix has a negative eigenvalue");
}

void DensityMatrix::sanitize() {
  rho_ = 0.5 * (rho_ + rho_.adjoint());
  const double tr = rho_.trace().real();
  if (tr != 0.0) rho_ /= tr;
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double n = psi.squaredNorm();
  if (!(n > 0.0)) throw DomainError("state vector must be nonzero");
  return DensityMatrix(psi * psi.adjoint() / n);
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index dimension, Eigen::Index index) {
  MatrixC rho = MatrixC::Zero(dimension, dimension);
  rho(index, index) = 1.0;
  return DensityMatrix(std::move(rho));
}

MatrixC liouvillian_apply(const MatrixC& h, const std::vector<JumpChannel>& channels,
                          const MatrixC& rho) {
  require_square(rho, rho.rows(), "density matrix");
  require_shapes(h, channels, rho.rows());
  MatrixC out = -kI * (h * rho - rho * h);
  for (const auto& ch : channels) {
    const MatrixC ldl = ch.op.adjoint() * ch.op;
    out += ch.rate * (ch.op * rho * ch.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

double suggested_step(const MatrixC& h, const std::vector<JumpChannel>& channels) {
  double scale = row_sum_norm(h);
  for (const auto& ch : channels) {
    scale += ch.rate * row_sum_norm(ch.op.adjoint() * ch.op);
  }
  return scale > 0.0 ? 0.02 / scale : 0.02;
}

DensityMatrix evolve(const DensityMatrix& rho0, const MatrixC& h,
                     const std::vector<JumpChannel>& channels, double t_final, double dt,
                     const TrajectoryObserver& observer) {
  const Eigen::Index d = rho0.dimension();
  require_shapes(h, channels, d);
  if (!(t_final >= 0.0)) throw DomainError("t_final must be >= 0");
  if (dt <= 0.0) dt = suggested_step(h, channels);

  const Generator gen(h, channels);
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double step = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;

  DensityMatrix rho = rho0;
  if (observer) observer(0.0, rho);
  for (long n = 0; n < steps; ++n) {
    const MatrixC& x = rho.matrix();
    const MatrixC k1 = gen.apply_general(x);
    const MatrixC k2 = gen.apply_general(x + 0.5 * step * k1);
    const MatrixC k3 = gen.apply_general(x + 0.5 * step * k2);
    const MatrixC k4 = gen.apply_general(x + step * k3);
    rho.matrix() = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho.sanitize();
    if (!rho.matrix().allFinite()) {
      std::ostringstream os;
      os << "master-equation integration diverged at step " << (n + 1);
      throw DivergenceError(os.str(), n + 1);
    }
    if (observer) observer(static_cast<double>(n + 1) * step, rho);
  }
  return rho;
}

namespace {

// Column-major vectorization: vec(A X B) = (B^T (x) A) vec(X).
MatrixC dense_liouvillian(const Generator& gen, Eigen::Index d) {
  const MatrixC id = MatrixC::Identity(d, d);
  MatrixC sup = -kI * kron(id, gen.heff) + kI * kron(gen.heff.conjugate(), id);
  for (const auto& [op, rate] : gen.jumps) sup += rate * kron(op.conjugate(), op);
  return sup;
}

struct Entry {
  Eigen::Index row;
  Eigen::Index col;
  cplx value;
};

std::vector<Entry> nonzeros(const MatrixC& m) {
  std::vector<Entry> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != cplx{0.0, 0.0}) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

void add_kron(std::vector<Eigen::Triplet<cplx>>& triplets, const std::vector<Entry>& a,
              const std::vector<Entry>& b, Eigen::Index d, cplx coeff) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      const Eigen::Index row = x.row * d + y.row;
      if (row == 0) continue;  // replaced by the trace condition
      triplets.emplace_back(row, x.col * d + y.col, coeff * x.value * y.value);
    }
  }
}

MatrixC unvec(const Eigen::VectorXcd& v, Eigen::Index d) {
  return Eigen::Map<const MatrixC>(v.data(), d, d);
}

}  // namespace

DensityMatrix steady_state(const MatrixC& h, const std::vector<JumpChannel>& channels,
                           const SteadyStateOptions& options) {
  const Eigen::Index d = h.rows();
  require_shapes(h, channels, d);
  if (std::none_of(channels.begin(), channels.end(), [](const auto& c) { return c.rate > 0.0; })) {
    throw DomainError("steady state requires at least one dissipative channel");
  }
  const Generator gen(h, channels);
  const Eigen::Index n = d * d;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXcd x;

  if (d <= options.dense_limit) {
    // Row 0 (the rho_00 equation) is redundant given the trace identity.
    MatrixC sup = dense_liouvillian(gen, d);
    sup.row(0).setZero();
    for (Eigen::Index i = 0; i < d; ++i) sup(0, i + i * d) = 1.0;
    Eigen::ColPivHouseholderQR<MatrixC> qr(sup);
    qr.setThreshold(options.rank_tolerance);
    if (!qr.isInvertible()) {
      const long dim = 1 + static_cast<long>(n - qr.rank());
      std::ostringstream os;
      os << "steady state is not unique: kernel dimension " << dim;
      throw NonUniqueSteadyStateError(os.str(), dim);
    }
    x = qr.solve(rhs);
  } else {
    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto id = nonzeros(MatrixC::Identity(d, d));
    const auto heff = nonzeros(gen.heff);
    const auto heff_conj = nonzeros(gen.heff.conjugate());
    add_kron(triplets, id, heff, d, -kI);
    add_kron(triplets, heff_conj, id, d, kI);
    for (const auto& [op, rate] : gen.jumps) {
      add_kron(triplets, nonzeros(op.conjugate()), nonzeros(op), d, rate);
    }
    for (Eigen::Index i = 0; i < d; ++i) triplets.emplace_back(0, i + i * d, 1.0);
    Eigen::SparseMatrix<cplx> sup(n, n);
    sup.setFromTriplets(triplets.begin(), triplets.end());
    sup.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(sup);
    if (lu.info() != Eigen::Success) {
      throw NonUniqueSteadyStateError("steady state is not unique: singular sparse Liouvillian", -1);
    }
    x = lu.solve(rhs);
    const double residual = (sup * x - rhs).norm();
    if (!(residual <= 1e-8 * std::max(1.0, x.norm()))) {
      throw NonUniqueSteadyStateError("steady state is not unique: sparse solve residual too large", -1);
    }
  }
  DensityMatrix rho(unvec(x, d));
  rho.sanitize();
  return rho;
}

RelaxationResult relax_to_steady_state(const DensityMatrix& rho0, const MatrixC& h,
                                       const std::vector<JumpChannel>& channels, double tol,
                                       double t_max) {
  const Generator gen(h, channels);
  const double dt = suggested_step(h, channels);
  RelaxationResult out{rho0, 0.0, 0.0};
  double horizon = 1.0;
  while (true) {
    out.rho = evolve(out.rho, h, channels, horizon, dt);
    out.time += horizon;
    out.residual = trace_norm_hermitian(gen.apply(out.rho.matrix()));
    if (out.residual < tol) return out;
    if (out.time >= t_max) {
      std::ostringstream os;
      os << "no steady state reached by t = " << out.time << " (residual " << out.residual << ")";
      throw AccuracyError(os.str());
    }
    horizon *= 2.0;
  }
}

cplx expectation(const MatrixC& op, const DensityMatrix& rho) {
  require_square(op, rho.dimension(), "observable");
  // Tr(O rho) without forming the product.
  return (op.transpose().cwiseProduct(rho.matrix())).sum();
}

double commutant_drift_check(const MatrixC& op, const MatrixC& h,
                             const std::vector<JumpChannel>& channels, const DensityMatrix& rho,
                             double commutator_tol) {
  const Eigen::Index d = rho.dimension();
  require_square(op, d, "observable");
  require_shapes(h, channels, d);
  for (const auto& ch : channels) {
    const double scale = std::max(1.0, op.norm() * ch.op.norm());
    const double c1 = commutator_norm(op, ch.op);
    const double c2 = commutator_norm(op, ch.op.adjoint());
    const double worst = std::max(c1, c2);
    if (worst > commutator_tol * scale) {
      std::ostringstream os;
      os << "observable does not commute with a jump operator: ||[O, L]|| = " << worst;
      throw PreconditionError(os.str(), worst);
    }
  }
  const MatrixC& r = rho.matrix();
  const cplx full = (op * liouvillian_apply(h, channels, r)).trace();
  const cplx coherent = (op * (-kI * (h * r - r * h))).trace();
  return std::abs(full - coherent);
}

MatrixC effective_hamiltonian(const MatrixC& h, const JumpChannel& channel) {
  return h - (0.5 * channel.rate) * kI * (channel.op.adjoint() * channel.op);
}

double leap_expectation_check(std::size_t channel_index, const MatrixC& h,
                              const std::vector<JumpChannel>& channels,
                              const std::vector<DensityMatrix>& trajectory,
                              double commutator_tol) {
  if (channel_index >= channels.size()) throw LookupError("channel index out of range");
  const JumpChannel& leap = channels[channel_index];
  for (std::size_t m = 0; m < channels.size(); ++m) {
    if (m == channel_index) continue;
    const auto& other = channels[m].op;
    const double scale = std::max(1.0, leap.op.norm() * other.norm());
    const double worst = std::max({commutator_norm(leap.op, other),
                                   commutator_norm(leap.op, other.adjoint()),
                                   commutator_norm(leap.op.adjoint(), other),
                                   commutator_norm(leap.op.adjoint(), other.adjoint())});
    if (worst > commutator_tol * scale) {
      std::ostringstream os;
      os << "leap operator does not commute with channel " << m << ": norm " << worst;
      throw PreconditionError(os.str(), worst);
    }
  }
  const MatrixC heff = effective_hamiltonian(h, leap);
  const MatrixC heff_dag = heff.adjoint();
  const MatrixC l = leap.op;
  const MatrixC ldag = l.adjoint();
  double worst = 0.0;
  for (const auto& rho : trajectory) {
    const MatrixC& r = rho.matrix();
    const MatrixC drho = liouvillian_apply(h, channels, r);
    const cplx lhs = kI * (l * drho).trace();
    const cplx rhs = (l * (heff * r - r * heff)).trace();
    const cplx lhs_dag = kI * (ldag * drho).trace();
    const cplx rhs_dag = (ldag * (heff_dag * r - r * heff_dag)).trace();
    worst = std::max({worst, std::abs(lhs - rhs), std::abs(lhs_dag - rhs_dag)});
  }
  return worst;
}

MatrixC quadratic_steady_state(const MatrixC& h, const VectorD& loss_rates,
                               const VectorD& gain_rates) {
  const Eigen::Index n = h.rows();
  require_square(h, n, "single-particle Hamiltonian");
  if (loss_rates.size() != n || gain_rates.size() != n) {
    throw DimensionError("one loss and one gain rate per mode required");
  }
  if ((loss_rates.array() < 0.0).any() || (gain_rates.array() < 0.0).any()) {
    throw DomainError("rates must be >= 0");
  }
  // d<c_i^+ c_j>/dt = (A^+ C + C A)_ij + gain_i delta_ij with
  // A = -i h^T - diag(loss + gain) / 2.
  MatrixC a = -kI * h.transpose();
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) -= 0.5 * (loss_rates(i) + gain_rates(i));

  const Eigen::ComplexEigenSolver<MatrixC> es(a, false);
  const double scale = std::max(1.0, row_sum_norm(a));
  const double slowest = es.eigenvalues().real().maxCoeff();
  if (slowest >= -1e-12 * scale) {
    std::ostringstream os;
    os << "drift matrix has a non-decaying mode (max Re eigenvalue " << slowest << ")";
    throw NoDecayError(os.str());
  }
  const MatrixC id = MatrixC::Identity(n, n);
  const MatrixC sylvester = kron(id, a.adjoint()) + kron(a.transpose(), id);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i + i * n) = -gain_rates(i);
  const Eigen::VectorXcd c = sylvester.partialPivLu().solve(rhs);
  return unvec(c, n);
}

}  // namespace nrbridge
