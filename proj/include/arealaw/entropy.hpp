#pragma once

// Entropy functionals of density states. Natural logarithms throughout.

#include "arealaw/states.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace arealaw {

inline constexpr double kInfiniteEntropy = std::numeric_limits<double>::infinity();

struct EntropyValue {
  double nats = 0.0;
  /// Set only by relative entropies whose first argument is not supported by
  /// the second; nats is then +inf.
  bool support_violation = false;

  bool infinite() const { return support_violation; }
};

/// Monotone sequence of (region size, value) pairs.
struct ConvergenceSeries {
  enum class Direction { NonIncreasing, NonDecreasing };
  std::vector<std::pair<int, double>> points;
  Direction direction = Direction::NonIncreasing;
  bool monotone = true;
  bool converged = false;
  double tolerance = 1e-6;
  /// Size at which the successive difference first fell below tolerance.
  std::optional<int> converged_at;
};

/// Fills monotone/converged for a series in place. `slack` is the allowed
/// step against the declared direction.
void assess(ConvergenceSeries& s, double slack);

/// S(rho) from the state's own spectrum.
double entropy(const DensityState& rho);

/// S_A(rho) = S(rho restricted to A).
EntropyValue von_neumann(const DensityState& rho, const Region& a);

/// S(rho | sigma) = Tr rho (log rho - log sigma). Both states must live on the
/// same support. +inf when rho puts weight > 1e-10 on eigenvectors of sigma
/// with eigenvalue < 1e-12.
EntropyValue relative_entropy(const DensityState& rho, const DensityState& sigma);

/// S_{I u J} - S_J for disjoint I, J (S_I when J is empty).
EntropyValue conditional_entropy(const DensityState& rho, const Region& i, const Region& j);

/// Conditional entropies S_{I|L_k} along L_k = sites of the support within
/// distance k of I (I excluded), k = 1, 2, ... until the support is
/// exhausted. Strong subadditivity makes the series non-increasing; a step
/// up by more than `slack` throws InvariantViolation.
ConvergenceSeries conditional_entropy_limit(const DensityState& rho, const Region& i, double tolerance = 1e-6,
                                            double slack = 1e-9);

/// S_A + S_B - S_{A u B} for disjoint A, B.
EntropyValue mutual_entropy(const DensityState& rho, const Region& a, const Region& b);

/// S(rho_{AB} | rho_A (x) rho_B). Fermionic states must be even.
EntropyValue mutual_entropy_relative(const DensityState& rho, const Region& a, const Region& b);

struct DonaldReport {
  double mutual = 0.0;    // I(L:R)
  double relative = 0.0;  // S(w | rho_L (x) rho_R)
  double left = 0.0;      // S(w_L | rho_L)
  double right = 0.0;     // S(w_R | rho_R)
  double residual = 0.0;  // |relative - mutual - left - right|
};

/// Decomposition of S(w | rho_L (x) rho_R). The supports of rho_L and rho_R
/// partition the support of w. All three states must be faithful.
DonaldReport donald_decompose(const DensityState& w, const DensityState& rho_l, const DensityState& rho_r);

/// ||rho - sigma||_1.
double trace_distance(const DensityState& rho, const DensityState& sigma);

/// 2 S(rho|sigma) - ||rho - sigma||_1^2 (+inf on support violation).
double pinsker_gap(const DensityState& rho, const DensityState& sigma);

/// S_X + S_Y - S_{X n Y} - S_{X u Y}.
double ssa_gap(const DensityState& rho, const Region& x, const Region& y);

struct EntropyBoundsReport {
  bool skipped = false;
  std::string warning;
  double entropy_i = 0.0;
  double conditional = 0.0;  // S_{I|J}
  double mutual = 0.0;       // I(I:J)
  double mutual_sub = 0.0;   // I(I:J_sub)
  double triangle_slack = 0.0;  // S_I - |S_{I|J}|
  double twice_slack = 0.0;     // 2 S_I - I(I:J)
  double monotone_slack = 0.0;  // I(I:J) - I(I:J_sub)
  /// S_I >= S_{I|J_sub} >= S_{I|J} >= S_{I|W\I}: the three consecutive gaps.
  std::vector<double> chain_slacks;
  double min_slack() const;
};

/// Entropy inequalities for I against J and a subregion J_sub of J (default:
/// J without its site farthest from I). Non-even fermionic states are skipped
/// with a warning, the bounds are not guaranteed there.
EntropyBoundsReport entropy_bounds_check(const DensityState& rho, const Region& i, const Region& j,
                                         std::optional<Region> j_sub = std::nullopt);

}  // namespace arealaw
