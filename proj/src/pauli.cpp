#include "arealaw/detail/pauli.hpp"

#include <cmath>
#include <vector>

namespace arealaw::detail {

PauliSum PauliSum::identity(int sites, cplx coeff) {
  PauliSum s(sites);
  s.add({}, coeff);
  return s;
}

PauliSum PauliSum::string(int sites, PauliKey key, cplx coeff) {
  PauliSum s(sites);
  s.add(key, coeff);
  return s;
}

void PauliSum::add(const PauliKey& key, cplx coeff) {
  if (coeff == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& [k, c] : other.terms_) add(k, c);
  return *this;
}

PauliSum& PauliSum::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  PauliSum out(sites_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : other.terms_) {
      out.add(product_key(ka, kb), product_sign(ka, kb) * ca * cb);
    }
  }
  return out;
}

PauliSum PauliSum::adjoint() const {
  // (X^x Z^z)^dagger = Z^z X^x = (-1)^{|x&z|} X^x Z^z
  PauliSum out(sites_);
  for (const auto& [k, c] : terms_) {
    out.add(k, std::conj(c) * (popcount_parity(k.x & k.z) ? -1.0 : 1.0));
  }
  return out;
}

void PauliSum::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

void accumulate_string(Matrix& m, const PauliKey& key, cplx coeff) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double s = popcount_parity(j & key.z) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(j ^ key.x), static_cast<Eigen::Index>(j)) += s * coeff;
  }
}

Matrix PauliSum::dense() const {
  const auto dim = Eigen::Index{1} << sites_;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [k, c] : terms_) accumulate_string(m, k, c);
  return m;
}

cplx string_expectation(const Matrix& rho, const PauliKey& key) {
  // Tr(rho P) = sum_j rho(j, j^x) (-1)^{|j&z|}
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  cplx acc = 0.0;
  for (std::uint64_t j = 0; j < dim; ++j) {
    const cplx v = rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ key.x));
    acc += popcount_parity(j & key.z) ? -v : v;
  }
  return acc;
}

SignedKey majorana(int sites, int index) {
  const int p = index / 2;
  const std::uint64_t bit = position_bit(sites, p);
  const std::uint64_t string = left_mask(sites, p);
  if (index % 2 == 0) return {{bit, string}, 1.0};
  return {{bit, string | bit}, cplx(0.0, 1.0)};
}

}  // namespace arealaw::detail
