#pragma once

// Density-matrix states on regions of a window.
//
// A state's matrix is written in the canonical representation of its support
// region: the region's sites relabelled 0..|R|-1 in ascending order (for
// fermions, the Jordan-Wigner representation of those modes). A state on the
// whole window is therefore in the window representation.

#include "arealaw/lattice.hpp"
#include "arealaw/linalg.hpp"
#include "arealaw/potential.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace arealaw {

enum class ParityFlag { Even, NonEven, Unknown };
std::string to_string(ParityFlag f);

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kFaithfulThreshold = 1e-12;

class DensityState {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-12).
  static DensityState from_matrix(Matrix m, const Region& support);

  /// Known exact spectrum and/or logarithm (Gibbs, products, perturbations).
  /// Only trace and Hermiticity are re-checked.
  static DensityState with_spectrum(Matrix m, const Region& support, RealVector eigenvalues,
                                    std::optional<Matrix> log_matrix);

  const Matrix& matrix() const { return matrix_; }
  const Region& support() const { return support_; }
  const Window& window() const { return support_.window(); }
  Statistics statistics() const { return support_.statistics(); }
  ParityFlag parity_flag() const { return parity_; }

  const RealVector& eigenvalues() const { return eigenvalues_; }
  double min_eigenvalue() const;
  /// A cached exact logarithm certifies a strictly positive spectrum even when
  /// tiny Boltzmann weights underflow the numeric threshold. So does being the
  /// marginal of such a state.
  bool faithful() const {
    return log_.has_value() || faithful_by_construction_ || min_eigenvalue() > kFaithfulThreshold;
  }

  /// Exact log D when it was known at construction.
  const std::optional<Matrix>& cached_log() const { return log_; }
  /// log D: cached value or eigendecomposition with the 1e-300 floor.
  Matrix log_matrix() const;

  /// Tr(D op) for an operator given in the same representation.
  double expectation(const Matrix& op) const;
  /// Expectation of a window operator; the state must live on the whole window.
  double expectation(const LocalOperator& op) const;

 private:
  DensityState(Matrix m, Region support, RealVector ev, std::optional<Matrix> log);

  Matrix matrix_;
  Region support_;
  RealVector eigenvalues_;
  std::optional<Matrix> log_;
  ParityFlag parity_ = ParityFlag::Unknown;
  bool faithful_by_construction_ = false;

  friend DensityState reduce(const DensityState& rho, const Region& a);
};

/// Quantum channel with Kraus operators supported on `region`. The operators
/// are stored in the canonical representation of the region.
class Channel {
 public:
  /// Checks sum K^dagger K = 1 to 1e-12; fermionic Kraus operators must have
  /// definite parity.
  Channel(Region region, std::vector<Matrix> local_kraus);

  static Channel identity(const Region& region);
  /// All Pauli strings (spin) / Majorana monomials (fermion) of the region
  /// with equal weight: the completely depolarizing channel.
  static Channel depolarizing(const Region& region);

  const Region& region() const { return region_; }
  const std::vector<Matrix>& local_kraus() const { return kraus_; }
  std::vector<LocalOperator> kraus_ops() const;

  /// (ch (x) id)(rho); rho must live on the whole window.
  Matrix apply(const Matrix& rho_window) const;

 private:
  Region region_;
  std::vector<Matrix> kraus_;
};

// ------------------------------------------------------------- construction

/// Spectral decomposition of H_I in I's canonical representation, reusable
/// across temperatures.
struct HamiltonianSpectrum {
  Region region;
  Matrix hamiltonian;
  linalg::EigenSystem eigen;
};
HamiltonianSpectrum diagonalize(const Potential& phi, const Region& region);
HamiltonianSpectrum diagonalize(const Matrix& h, const Region& region);

/// exp(-beta H_I)/Tr, computed with a max-eigenvalue shift.
DensityState gibbs_state(const Potential& phi, const Region& region, double beta);
DensityState gibbs_state(const HamiltonianSpectrum& h, double beta);

struct GroundState {
  DensityState state;
  int degeneracy = 1;
  double energy = 0.0;
  double gap = 0.0;  // E_1 - E_0 above the degenerate manifold (0 if none)
};
/// Normalized projector onto the lowest eigenspace (relative tolerance 1e-10).
GroundState ground_state(const Potential& phi, const Region& region);
GroundState ground_state(const HamiltonianSpectrum& h);

/// Tracial state 1/2^|R| on a region.
DensityState tracial_state(const Region& region);

/// Pure state |psi><psi| on a region (psi normalized internally).
DensityState pure_state(const Eigen::VectorXcd& psi, const Region& region);

// ------------------------------------------------------------- operations

/// Restriction to a subregion A of the state's support.
/// Spin: partial trace. Fermion: subalgebra reduction, computed as a partial
/// trace after reordering the modes so that A comes first.
DensityState reduce(const DensityState& rho, const Region& a);

/// Fermionic reduction through the expansion over Majorana monomials of A.
/// Valid for any A and any state; exposed for cross-checks.
DensityState reduce_by_expansion(const DensityState& rho, const Region& a);

/// Product extension on the union of two disjoint supports. Spin: tensor
/// product. Fermion: CAR product extension, available for even states only.
DensityState product_extend(const DensityState& a, const DensityState& b);

/// [omega^h] = exp(log D + h)/Tr, h a window operator supported in the state's
/// support. The state must be faithful and h Hermitian.
DensityState perturb(const DensityState& omega, const LocalOperator& h);
DensityState perturb(const DensityState& omega, const Matrix& h);

/// psi = (ch (x) id)(rho). Checks that the marginal outside the channel region
/// is untouched (1e-12).
DensityState lts_trial(const DensityState& rho, const Channel& ch);

struct EvenCheck {
  bool even = true;
  double residual = 0.0;
};
/// ||P D P - D|| (Frobenius). Spin statistics report even with residual 0.
EvenCheck is_even(const DensityState& rho);

/// F(psi) = psi(H) - S(psi)/beta for the window Hamiltonian H.
double free_energy(const DensityState& psi, const Matrix& h, double beta);

}  // namespace arealaw
