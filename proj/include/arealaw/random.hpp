#pragma once

// Seeded random states, unitaries and channels for the property suites and
// the LTS trial family.

#include "arealaw/states.hpp"

#include <cstdint>
#include <random>

namespace arealaw {

using Rng = std::mt19937_64;

/// Independent stream for grid point `index` of a run with seed `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t index);

/// Complex Ginibre matrix, entries with independent unit normal parts.
Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary (QR of Ginibre with phase correction).
Matrix random_unitary(Eigen::Index dim, Rng& rng);

/// Random Hermitian matrix scaled to operator norm `norm`.
Matrix random_hermitian(Eigen::Index dim, Rng& rng, double norm = 1.0);

/// Haar unitary inside each parity sector (block diagonal in the JW basis).
Matrix random_even_unitary(Eigen::Index dim, Rng& rng);

/// Parity-preserving part of a Hermitian matrix, i.e. P m P + m over 2.
Matrix even_part(const Matrix& m);

struct RandomStateOptions {
  /// Weight of the tracial state mixed in; > 0 keeps the state faithful.
  double mix = 0.0;
  /// Project onto the even sector algebra (fermions).
  bool even = false;
  /// Rank of the Ginibre factor; 0 = full rank.
  Eigen::Index rank = 0;
};

/// Induced-measure density matrix G G^dagger / Tr on a region.
DensityState random_state(const Region& region, Rng& rng, RandomStateOptions opt = {});

/// Channel on a region drawn from the LTS trial family: random unitaries,
/// unitary-plus-dephasing, and depolarizing mixtures on one site. Fermionic
/// channels use only definite-parity Kraus operators.
Channel random_channel(const Region& region, Rng& rng);

}  // namespace arealaw
