#pragma once

// Symbolic Pauli-string algebra on n qubits.
//
// A string is coeff * X^x Z^z, with x and z bit masks. Qubit position p
// (0 = leftmost site of the representation) lives at bit (n - 1 - p), so the
// dense index of a basis state reads the sites left to right and Kronecker
// products in site order need no reshuffling.

#include "arealaw/core.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <map>

namespace arealaw::detail {

struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  auto operator<=>(const PauliKey&) const = default;
};

inline std::uint64_t position_bit(int sites, int position) {
  return std::uint64_t{1} << (sites - 1 - position);
}

/// Bits of all positions strictly left of `position`.
inline std::uint64_t left_mask(int sites, int position) {
  const std::uint64_t all = (std::uint64_t{1} << sites) - 1;
  const std::uint64_t keep = (std::uint64_t{1} << (sites - position)) - 1;
  return all & ~keep;
}

inline int popcount_parity(std::uint64_t v) { return std::popcount(v) & 1; }

/// (X^{a.x} Z^{a.z}) (X^{b.x} Z^{b.z}) = sign * X^{a.x^b.x} Z^{a.z^b.z}.
inline double product_sign(const PauliKey& a, const PauliKey& b) {
  return popcount_parity(a.z & b.x) ? -1.0 : 1.0;
}

inline PauliKey product_key(const PauliKey& a, const PauliKey& b) {
  return {a.x ^ b.x, a.z ^ b.z};
}

class PauliSum {
 public:
  explicit PauliSum(int sites) : sites_(sites) {}

  static PauliSum identity(int sites, cplx coeff = 1.0);
  static PauliSum string(int sites, PauliKey key, cplx coeff = 1.0);

  int sites() const { return sites_; }
  const std::map<PauliKey, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const PauliKey& key, cplx coeff);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(cplx s);
  PauliSum operator*(const PauliSum& other) const;
  PauliSum adjoint() const;

  /// Drops coefficients with modulus <= tol.
  void prune(double tol = 0.0);

  Matrix dense() const;

 private:
  int sites_;
  std::map<PauliKey, cplx> terms_;
};

/// Adds coeff * X^x Z^z into a dense matrix of matching dimension.
void accumulate_string(Matrix& m, const PauliKey& key, cplx coeff);

/// Tr(rho * X^x Z^z).
cplx string_expectation(const Matrix& rho, const PauliKey& key);

/// Jordan-Wigner Majorana operators on n modes:
/// gamma_{2p} = Z_{<p} X_p, gamma_{2p+1} = Z_{<p} Y_p = i Z_{<p} X_p Z_p.
struct SignedKey {
  PauliKey key;
  cplx coeff;
};
SignedKey majorana(int sites, int index);

}  // namespace arealaw::detail
