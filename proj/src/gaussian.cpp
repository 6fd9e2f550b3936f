#include "arealaw/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arealaw {

namespace {

constexpr double kZeroMode = 1e-12;

struct Ladder {
  int site;
  bool dagger;
};

// c_j = (g_{2j} + i g_{2j+1}) / 2 as the rows of an L x 2L matrix.
Matrix majorana_frame(int l) {
  Matrix w = Matrix::Zero(l, 2 * l);
  for (int j = 0; j < l; ++j) {
    w(j, 2 * j) = 0.5;
    w(j, 2 * j + 1) = cplx(0.0, 0.5);
  }
  return w;
}

double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (p < 1.0) s -= (1.0 - p) * std::log1p(-p);
  return s;
}

void require_modes(const MajoranaCovariance& m, const std::vector<int>& sites) {
  for (int s : sites) {
    if (s < 0 || s >= m.sites()) throw PreconditionError("mode index outside the chain");
  }
}

}  // namespace

Matrix BdGHamiltonian::nambu() const {
  const auto l = hopping.rows();
  Matrix h(2 * l, 2 * l);
  h.topLeftCorner(l, l) = hopping;
  h.topRightCorner(l, l) = -pairing.conjugate();
  h.bottomLeftCorner(l, l) = pairing;
  h.bottomRightCorner(l, l) = -hopping.conjugate();
  return h;
}

namespace {

// H - constant = sum_ab K_ab g_a g_b
Matrix majorana_form(const BdGHamiltonian& h) {
  const Matrix w = majorana_frame(h.sites());
  return w.adjoint() * h.hopping * w + 0.5 * w.transpose() * h.pairing * w +
         0.5 * w.adjoint() * h.pairing.adjoint() * w.conjugate();
}

}  // namespace

RealMatrix BdGHamiltonian::majorana() const {
  const Matrix k = majorana_form(*this);
  const Matrix anti = (k - k.transpose()) * 0.5;
  const Matrix h = cplx(0.0, -4.0) * anti;
  if (h.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw ContractError("BdG Hamiltonian is not Hermitian");
  }
  return h.real();
}

double BdGHamiltonian::majorana_constant() const { return constant + majorana_form(*this).trace().real(); }

BdGHamiltonian bdg_from_potential(const Potential& phi, int sites) {
  if (phi.statistics() != Statistics::Fermion || !phi.is_quadratic()) {
    throw UnsupportedError("free-fermion path needs a quadratic fermionic potential");
  }
  if (sites <= 0) throw PreconditionError("chain needs at least one site");
  BdGHamiltonian out;
  out.hopping = Matrix::Zero(sites, sites);
  Matrix p = Matrix::Zero(sites, sites);  // sum P_ij c_i c_j
  Matrix q = Matrix::Zero(sites, sites);  // sum Q_ij c_i^+ c_j^+
  cplx constant = 0.0;
  for (const auto& t : phi.instances_in_interval(0, sites - 1)) {
    const auto& base = phi.base_terms()[t.base_index];
    for (const auto& mono : base.monomials) {
      std::vector<Ladder> ops;
      for (const auto& f : mono.factors) {
        const int s = f.offset + t.shift;
        switch (f.generator) {
          case Generator::C: ops.push_back({s, false}); break;
          case Generator::Cdag: ops.push_back({s, true}); break;
          case Generator::N:
            ops.push_back({s, true});
            ops.push_back({s, false});
            break;
          case Generator::Identity: break;
          default: throw UnsupportedError("spin generator in a fermionic potential");
        }
      }
      const cplx c = mono.coefficient;
      if (ops.empty()) {
        constant += c;
        continue;
      }
      if (ops.size() != 2) throw UnsupportedError("non-quadratic monomial");
      const auto [i, di] = ops[0];
      const auto [j, dj] = ops[1];
      if (di && !dj) {
        out.hopping(i, j) += c;
      } else if (!di && dj) {  // c_i c_j^+ = delta_ij - c_j^+ c_i
        if (i == j) constant += c;
        out.hopping(j, i) -= c;
      } else if (!di && !dj) {
        p(i, j) += c;
      } else {
        q(i, j) += c;
      }
    }
  }
  out.pairing = p - p.transpose();
  const Matrix qa = q - q.transpose();
  const double scale = std::max(1.0, out.hopping.cwiseAbs().maxCoeff() + out.pairing.cwiseAbs().maxCoeff());
  if ((qa + out.pairing.conjugate()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      !linalg::is_hermitian(out.hopping, 1e-12)) {
    throw ContractError("quadratic potential is not Hermitian");
  }
  if (std::abs(constant.imag()) > 1e-12 * scale) throw ContractError("quadratic potential has a complex constant");
  out.constant = constant.real();
  return out;
}

MajoranaCovariance thermal_covariance(const BdGHamiltonian& h, double beta) {
  if (!(beta > 0.0)) throw DomainError("thermal covariance needs beta > 0");
  const RealMatrix hm = h.majorana();
  // X = i h (Hermitian); M = i f(X) with f = tanh(beta x / 2) or sign(x)
  const Matrix x = cplx(0.0, 1.0) * hm.cast<cplx>();
  const linalg::EigenSystem es = linalg::eigh(x);
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  MajoranaCovariance out;
  RealVector f(es.values.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const double e = es.values(k);
    if (std::isinf(beta)) {
      if (std::abs(e) <= kZeroMode * scale) {
        out.zero_modes = true;
        f(k) = 0.0;
      } else {
        f(k) = e > 0.0 ? 1.0 : -1.0;
      }
    } else {
      f(k) = std::tanh(0.5 * beta * e);
    }
  }
  const Matrix m = cplx(0.0, 1.0) * linalg::reconstruct(es, f);
  out.m = m.real();
  out.m = (out.m - out.m.transpose()).eval() * 0.5;
  return out;
}

EntropyValue gaussian_entropy(const MajoranaCovariance& m, const std::vector<int>& sites) {
  require_modes(m, sites);
  if (sites.empty()) return {0.0, false};
  const auto n = static_cast<Eigen::Index>(sites.size());
  Matrix sub(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < 2 * n; ++a) {
    for (Eigen::Index b = 0; b < 2 * n; ++b) {
      const auto ia = 2 * sites[static_cast<std::size_t>(a / 2)] + a % 2;
      const auto ib = 2 * sites[static_cast<std::size_t>(b / 2)] + b % 2;
      sub(a, b) = cplx(0.0, m.m(ia, ib));
    }
  }
  const RealVector nu = linalg::eigvalsh(sub);
  double s = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (std::abs(nu(k)) > 1.0 + 1e-10) throw DomainError("covariance matrix is not a valid state");
    const double v = std::clamp(nu(k), -1.0, 1.0);
    s += 0.5 * binary_entropy(0.5 * (1.0 + v));
  }
  return {s, false};
}

EntropyValue gaussian_mutual(const MajoranaCovariance& m, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  std::sort(ab.begin(), ab.end());
  if (std::adjacent_find(ab.begin(), ab.end()) != ab.end()) throw PreconditionError("mode sets overlap");
  return {gaussian_entropy(m, a).nats + gaussian_entropy(m, b).nats - gaussian_entropy(m, ab).nats, false};
}

ThermalDestructionScan thermal_destruction_scan(const ModelSpec& model, const std::vector<double>& betas,
                                                const std::vector<int>& ladder, double saturation_tol) {
  const Potential phi = make_potential(model);
  ThermalDestructionScan scan;
  {
    const int d = std::max(1, phi.range());
    const Window w(0, 2 * d - 1, phi.statistics());
    scan.coupling_norm = half_chain_coupling(phi, d, w).norm;
  }
  for (double beta : betas) {
    ScanSeries series;
    series.beta = beta;
    series.bound = std::isinf(beta) ? std::numeric_limits<double>::infinity() : 2.0 * beta * scan.coupling_norm;
    for (int l : ladder) {
      BdGHamiltonian h = bdg_from_potential(phi, l);
      ScanPoint pt;
      pt.sites = l;
      MajoranaCovariance m = thermal_covariance(h, beta);
      if (m.zero_modes) {
        pt.zero_modes = true;
        pt.mu_shifted = true;
        h.hopping.diagonal().array() -= 1e-9;
        m = thermal_covariance(h, beta);
      }
      std::vector<int> left, right;
      for (int s = 0; s < l; ++s) (s < l / 2 ? left : right).push_back(s);
      pt.mutual = gaussian_mutual(m, left, right).nats;
      series.points.push_back(pt);
    }
    series.increasing = series.points.size() > 1;
    for (std::size_t k = 1; k < series.points.size(); ++k) {
      const double step = series.points[k].mutual - series.points[k - 1].mutual;
      if (!(step > 0.0)) series.increasing = false;
      if (std::abs(step) < saturation_tol) {
        if (!series.saturated_at) series.saturated_at = series.points[k - 1].sites;
      } else {
        series.saturated_at.reset();
      }
    }
    series.saturated = series.saturated_at.has_value();
    for (const auto& pt : series.points) {
      if (pt.mutual > series.bound + 1e-6) series.below_bound = false;
    }
    if (std::isinf(beta)) {
      series.label = series.increasing && !series.saturated
                         ? "growth trend over the ladder (divergence itself is not verifiable at finite size)"
                         : "no growth trend over the ladder";
    } else {
      series.label = series.saturated ? "saturated" : "not saturated over the ladder";
    }
    scan.series.push_back(std::move(series));
  }
  return scan;
}

}  // namespace arealaw
