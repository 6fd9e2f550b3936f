#include "arealaw/states.hpp"

#include "arealaw/detail/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace arealaw {

std::string to_string(ParityFlag f) {
  switch (f) {
    case ParityFlag::Even: return "even";
    case ParityFlag::NonEven: return "non-even";
    case ParityFlag::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

double parity_residual(const Matrix& m) {
  // ||P m P - m||_F = 2 ||odd part||_F
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (detail::popcount_parity(static_cast<std::uint64_t>(i ^ j))) acc += std::norm(m(i, j));
    }
  }
  return 2.0 * std::sqrt(acc);
}

void require_unit_trace(const Matrix& m) {
  const cplx tr = m.trace();
  if (std::abs(tr - cplx(1.0)) > kStateTolerance * std::max<double>(1.0, std::sqrt(double(m.rows())))) {
    throw ContractError("density matrix trace differs from 1 by " + std::to_string(std::abs(tr - cplx(1.0))));
  }
}

Matrix hermitize(Matrix m) {
  if (!linalg::is_hermitian(m, kStateTolerance)) throw ContractError("density matrix is not Hermitian");
  Matrix h = (m + m.adjoint()) * 0.5;
  return h;
}

void require_dim(const Matrix& m, const Region& r) {
  if (static_cast<std::size_t>(m.rows()) != r.dim() || m.rows() != m.cols()) {
    throw PreconditionError("matrix dimension does not match the region " + to_string(r));
  }
}

}  // namespace

// ------------------------------------------------------------- DensityState

DensityState::DensityState(Matrix m, Region support, RealVector ev, std::optional<Matrix> log)
    : matrix_(std::move(m)), support_(std::move(support)), eigenvalues_(std::move(ev)), log_(std::move(log)) {
  if (statistics() == Statistics::Fermion) {
    parity_ = parity_residual(matrix_) <= kStateTolerance ? ParityFlag::Even : ParityFlag::NonEven;
  }
}

DensityState DensityState::from_matrix(Matrix m, const Region& support) {
  require_dim(m, support);
  Matrix h = hermitize(std::move(m));
  require_unit_trace(h);
  RealVector ev = linalg::eigvalsh(h);
  if (ev.size() > 0 && ev.minCoeff() < -kStateTolerance) {
    throw DomainError("density matrix has eigenvalue " + std::to_string(ev.minCoeff()));
  }
  return DensityState(std::move(h), support, std::move(ev), std::nullopt);
}

DensityState DensityState::with_spectrum(Matrix m, const Region& support, RealVector eigenvalues,
                                         std::optional<Matrix> log_matrix) {
  require_dim(m, support);
  Matrix h = hermitize(std::move(m));
  require_unit_trace(h);
  return DensityState(std::move(h), support, std::move(eigenvalues), std::move(log_matrix));
}

double DensityState::min_eigenvalue() const {
  return eigenvalues_.size() ? eigenvalues_.minCoeff() : 1.0;
}

Matrix DensityState::log_matrix() const {
  if (log_) return *log_;
  return linalg::hermitian_function(matrix_, [](double x) { return std::log(std::max(x, linalg::kLogFloor)); });
}

double DensityState::expectation(const Matrix& op) const {
  if (op.rows() != matrix_.rows()) throw PreconditionError("operator does not match the state representation");
  return linalg::trace_product(matrix_, op).real();
}

double DensityState::expectation(const LocalOperator& op) const {
  if (!(op.window() == window()) || support_.size() != static_cast<std::size_t>(window().size())) {
    throw PreconditionError("window operator expectation needs a state on the whole window");
  }
  return expectation(op.matrix());
}

// ------------------------------------------------------------- Channel

Channel::Channel(Region region, std::vector<Matrix> local_kraus)
    : region_(std::move(region)), kraus_(std::move(local_kraus)) {
  const auto d = static_cast<Eigen::Index>(region_.dim());
  if (kraus_.empty()) throw ContractError("channel needs at least one Kraus operator");
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw PreconditionError("Kraus operator does not match its region");
    if (region_.statistics() == Statistics::Fermion &&
        classify_parity(k, Statistics::Fermion) == Parity::Mixed) {
      throw ContractError("fermionic Kraus operators need definite parity");
    }
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kStateTolerance) {
    throw ContractError("Kraus operators are not trace preserving");
  }
}

Channel Channel::identity(const Region& region) {
  const auto d = static_cast<Eigen::Index>(region.dim());
  return Channel(region, {Matrix::Identity(d, d)});
}

Channel Channel::depolarizing(const Region& region) {
  const int m = static_cast<int>(region.size());
  const std::uint64_t count = std::uint64_t{1} << m;
  const double w = 1.0 / static_cast<double>(count);  // 1/2^m per unitary string
  std::vector<Matrix> kraus;
  for (std::uint64_t x = 0; x < count; ++x) {
    for (std::uint64_t z = 0; z < count; ++z) {
      kraus.push_back(detail::PauliSum::string(m, {x, z}, w).dense());
    }
  }
  return Channel(region, std::move(kraus));
}

std::vector<LocalOperator> Channel::kraus_ops() const {
  std::vector<LocalOperator> out;
  out.reserve(kraus_.size());
  for (const auto& k : kraus_) out.push_back(embed(k, region_));
  return out;
}

Matrix Channel::apply(const Matrix& rho_window) const {
  RegionSplit split(Region::whole(region_.window()), region_);
  const Matrix s = split.to_split(rho_window);
  const auto da = static_cast<Eigen::Index>(split.first_dim());
  const auto db = static_cast<Eigen::Index>(split.rest_dim());
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  Matrix t(s.rows(), s.cols());
  for (const auto& k : kraus_) {
    // t = (K (x) 1) s, then out += t (K^dagger (x) 1), block by block.
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index a2 = 0; a2 < da; ++a2) {
        auto blk = t.block(i * db, a2 * db, db, db);
        blk.setZero();
        for (Eigen::Index a = 0; a < da; ++a) {
          if (k(i, a) != cplx(0.0)) blk += k(i, a) * s.block(a * db, a2 * db, db, db);
        }
      }
    }
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) {
        auto blk = out.block(i * db, j * db, db, db);
        for (Eigen::Index a2 = 0; a2 < da; ++a2) {
          const cplx kc = std::conj(k(j, a2));
          if (kc != cplx(0.0)) blk += kc * t.block(i * db, a2 * db, db, db);
        }
      }
    }
  }
  return split.to_frame(out);
}

// ------------------------------------------------------------- construction

HamiltonianSpectrum diagonalize(const Matrix& h, const Region& region) {
  require_dim(h, region);
  if (!linalg::is_hermitian(h, 1e-12)) throw ContractError("Hamiltonian is not Hermitian");
  return {region, h, linalg::eigh(h)};
}

HamiltonianSpectrum diagonalize(const Potential& phi, const Region& region) {
  region.window().require_within_cap();
  return diagonalize(local_hamiltonian(phi, region), region);
}

DensityState gibbs_state(const HamiltonianSpectrum& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("gibbs_state needs finite beta > 0 (use ground_state for beta = infinity)");
  }
  const RealVector& e = h.eigen.values;
  const auto d = e.size();
  const double e0 = e(0);
  RealVector w(d);
  for (Eigen::Index k = 0; k < d; ++k) w(k) = std::exp(-beta * (e(k) - e0));
  const double z = w.sum();
  RealVector p = w / z;
  Matrix dm = linalg::reconstruct(h.eigen, p);
  Matrix log = -beta * h.hamiltonian;
  log.diagonal().array() += beta * e0 - std::log(z);
  return DensityState::with_spectrum(std::move(dm), h.region, std::move(p), std::move(log));
}

DensityState gibbs_state(const Potential& phi, const Region& region, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("gibbs_state needs finite beta > 0 (use ground_state for beta = infinity)");
  }
  return gibbs_state(diagonalize(phi, region), beta);
}

GroundState ground_state(const HamiltonianSpectrum& h) {
  const RealVector& e = h.eigen.values;
  const double e0 = e(0);
  const double tol = 1e-10 * std::max(1.0, std::abs(e0));
  int g = 1;
  while (g < e.size() && e(g) - e0 <= tol) ++g;
  RealVector p = RealVector::Zero(e.size());
  p.head(g).setConstant(1.0 / g);
  Matrix dm = linalg::reconstruct(h.eigen, p);
  const double gap = g < e.size() ? e(g) - e0 : 0.0;
  return {DensityState::with_spectrum(std::move(dm), h.region, std::move(p), std::nullopt), g, e0, gap};
}

GroundState ground_state(const Potential& phi, const Region& region) {
  return ground_state(diagonalize(phi, region));
}

DensityState tracial_state(const Region& region) {
  const auto d = static_cast<Eigen::Index>(region.dim());
  Matrix log = Matrix::Identity(d, d) * (-std::log(static_cast<double>(d)));
  return DensityState::with_spectrum(Matrix::Identity(d, d) / static_cast<double>(d), region,
                                     RealVector::Constant(d, 1.0 / static_cast<double>(d)), std::move(log));
}

DensityState pure_state(const Eigen::VectorXcd& psi, const Region& region) {
  const double n = psi.norm();
  if (n == 0.0) throw DomainError("pure_state needs a non-zero vector");
  Eigen::VectorXcd v = psi / n;
  RealVector ev = RealVector::Zero(v.size());
  ev(v.size() - 1) = 1.0;
  return DensityState::with_spectrum(v * v.adjoint(), region, std::move(ev), std::nullopt);
}

// ------------------------------------------------------------- operations

DensityState reduce_by_expansion(const DensityState& rho, const Region& a) {
  const Region& sup = rho.support();
  if (!sup.contains(a)) throw PreconditionError("reduction region must lie in the state's support");
  const int n = static_cast<int>(sup.size());
  const int m = static_cast<int>(a.size());
  std::vector<detail::SignedKey> frame_gamma;
  std::vector<detail::SignedKey> local_gamma;
  for (int s : a.sites()) {
    const int p = sup.rank(s);
    const int q = a.rank(s);
    for (int k = 0; k < 2; ++k) {
      frame_gamma.push_back(detail::majorana(n, 2 * p + k));
      local_gamma.push_back(detail::majorana(m, 2 * q + k));
    }
  }
  const bool even_only = rho.parity_flag() == ParityFlag::Even;
  const auto dm = static_cast<Eigen::Index>(a.dim());
  const double norm = 1.0 / static_cast<double>(a.dim());
  Matrix out = Matrix::Zero(dm, dm);
  const Matrix& d = rho.matrix();

  // Depth-first over Majorana monomials gamma_{i1} ... gamma_{ik}, i1 < ... < ik.
  const int count = 2 * m;
  std::function<void(int, detail::SignedKey, detail::SignedKey, int)> visit =
      [&](int next, detail::SignedKey fr, detail::SignedKey lo, int order) {
        if (!even_only || order % 2 == 0) {
          const cplx value = fr.coeff * detail::string_expectation(d, fr.key);
          if (value != cplx(0.0)) {
            // local monomial adjoint: conj(c) (-1)^{|x&z|} X^x Z^z
            const double s = detail::popcount_parity(lo.key.x & lo.key.z) ? -1.0 : 1.0;
            detail::accumulate_string(out, lo.key, value * std::conj(lo.coeff) * s * norm);
          }
        }
        for (int i = next; i < count; ++i) {
          const auto& gf = frame_gamma[static_cast<std::size_t>(i)];
          const auto& gl = local_gamma[static_cast<std::size_t>(i)];
          detail::SignedKey nf{detail::product_key(fr.key, gf.key),
                               fr.coeff * gf.coeff * detail::product_sign(fr.key, gf.key)};
          detail::SignedKey nl{detail::product_key(lo.key, gl.key),
                               lo.coeff * gl.coeff * detail::product_sign(lo.key, gl.key)};
          visit(i + 1, nf, nl, order + 1);
        }
      };
  visit(0, {{}, 1.0}, {{}, 1.0}, 0);
  return DensityState::from_matrix(std::move(out), a);
}

DensityState reduce(const DensityState& rho, const Region& a) {
  const Region& sup = rho.support();
  if (!(a.window() == sup.window()) || !sup.contains(a)) {
    throw PreconditionError("reduction region " + to_string(a) + " is not inside the state's support");
  }
  if (a.size() == sup.size()) return rho;
  // For fermions the split frame is the mode-reordered Jordan-Wigner
  // representation in which A is a prefix, so the partial trace there is the
  // restriction to the subalgebra of A for any state.
  RegionSplit split(sup, a);
  DensityState out = DensityState::from_matrix(split.trace_out_rest(rho.matrix()), a);
  // Marginals of a faithful state are faithful; tiny eigenvalues are rounding.
  out.faithful_by_construction_ = rho.faithful();
  return out;
}

DensityState product_extend(const DensityState& a, const DensityState& b) {
  if (!(a.window() == b.window())) throw PreconditionError("product extension across different windows");
  if (!a.support().disjoint(b.support())) throw PreconditionError("product extension needs disjoint supports");
  if (a.statistics() == Statistics::Fermion &&
      (a.parity_flag() != ParityFlag::Even || b.parity_flag() != ParityFlag::Even)) {
    throw UnsupportedError("fermionic product extension exists here only for even states");
  }
  const Region joint = a.support().united(b.support());
  RegionSplit split(joint, a.support());
  Matrix dm = split.to_frame(linalg::kron(a.matrix(), b.matrix()));

  const RealVector& ea = a.eigenvalues();
  const RealVector& eb = b.eigenvalues();
  RealVector ev(ea.size() * eb.size());
  for (Eigen::Index i = 0; i < ea.size(); ++i) ev.segment(i * eb.size(), eb.size()) = ea(i) * eb;

  std::optional<Matrix> log;
  if (a.faithful() && b.faithful()) {
    const auto da = a.matrix().rows();
    const auto db = b.matrix().rows();
    Matrix l = linalg::kron(a.log_matrix(), Matrix::Identity(db, db)) +
               linalg::kron(Matrix::Identity(da, da), b.log_matrix());
    log = split.to_frame(l);
  }
  return DensityState::with_spectrum(std::move(dm), joint, std::move(ev), std::move(log));
}

DensityState perturb(const DensityState& omega, const Matrix& h) {
  if (h.rows() != omega.matrix().rows() || h.cols() != h.rows()) {
    throw PreconditionError("perturbation does not match the state representation");
  }
  if (!linalg::is_hermitian(h, 1e-12)) throw ContractError("perturbation must be Hermitian");
  if (!omega.faithful()) throw DomainError("perturbation needs a faithful state");
  Matrix k = omega.log_matrix() + h;
  k = (k + k.adjoint()).eval() * 0.5;
  linalg::EigenSystem es = linalg::eigh(k);
  const double top = es.values.maxCoeff();
  RealVector w = (es.values.array() - top).exp();
  const double z = w.sum();
  RealVector p = w / z;
  Matrix dm = linalg::reconstruct(es, p);
  k.diagonal().array() -= top + std::log(z);
  return DensityState::with_spectrum(std::move(dm), omega.support(), std::move(p), std::move(k));
}

DensityState perturb(const DensityState& omega, const LocalOperator& h) {
  if (!(h.window() == omega.window()) || !omega.support().contains(Region::whole(h.window()))) {
    throw PreconditionError("perturb with a window operator needs a state on the whole window");
  }
  return perturb(omega, h.matrix());
}

DensityState lts_trial(const DensityState& rho, const Channel& ch) {
  const Region whole = Region::whole(rho.window());
  if (!(ch.region().window() == rho.window()) || rho.support().size() != whole.size()) {
    throw PreconditionError("lts_trial needs a state on the whole window of the channel");
  }
  if (rho.statistics() == Statistics::Fermion && rho.parity_flag() != ParityFlag::Even) {
    throw PreconditionError("fermionic LTS trials need an even state");
  }
  DensityState psi = DensityState::from_matrix(ch.apply(rho.matrix()), whole);
  const Region exterior = ch.region().complement();
  if (!exterior.empty()) {
    const double residual =
        (reduce(psi, exterior).matrix() - reduce(rho, exterior).matrix()).cwiseAbs().maxCoeff();
    if (residual > kStateTolerance) {
      throw InvariantViolation("trial state changed the exterior marginal by " + std::to_string(residual));
    }
  }
  return psi;
}

EvenCheck is_even(const DensityState& rho) {
  if (rho.statistics() == Statistics::Spin) return {true, 0.0};
  const double r = parity_residual(rho.matrix());
  return {r <= kStateTolerance, r};
}

double free_energy(const DensityState& psi, const Matrix& h, double beta) {
  if (!(beta > 0.0)) throw DomainError("free energy needs beta > 0");
  return psi.expectation(h) - linalg::entropy_of_spectrum(psi.eigenvalues()) / beta;
}

}  // namespace arealaw
