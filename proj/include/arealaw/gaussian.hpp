#pragma once

// Free-fermion fast path. Quadratic Hamiltonians
//   H = sum A_ij c_i^+ c_j + 1/2 sum (B_ij c_i c_j + h.c.) + E
// are mapped to real antisymmetric Majorana form H = (i/4) sum h_ab g_a g_b + E'
// with g_{2j} = c_j + c_j^+, g_{2j+1} = i (c_j^+ - c_j). Gaussian states are
// described by M_ab = i <g_a g_b> (a != b).

#include "arealaw/entropy.hpp"
#include "arealaw/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arealaw {

struct BdGHamiltonian {
  Matrix hopping;  // A, Hermitian
  Matrix pairing;  // B, antisymmetric
  double constant = 0.0;

  int sites() const { return static_cast<int>(hopping.rows()); }
  /// Nambu matrix [[A, -conj(B)], [B, -conj(A)]] acting on (c, c^+).
  Matrix nambu() const;
  /// Real antisymmetric h with H = (i/4) g^T h g + majorana_constant().
  RealMatrix majorana() const;
  double majorana_constant() const;
};

/// Open chain of L sites from a quadratic fermionic potential. Non-quadratic
/// terms throw UnsupportedError.
BdGHamiltonian bdg_from_potential(const Potential& phi, int sites);

struct MajoranaCovariance {
  RealMatrix m;
  bool zero_modes = false;  // ground state with unresolved zero modes

  int sites() const { return static_cast<int>(m.rows() / 2); }
};

/// Thermal covariance M = i tanh(i beta h / 2); beta = +inf gives the ground
/// state through the sign function (zero modes left unoccupied-mixed and
/// flagged).
MajoranaCovariance thermal_covariance(const BdGHamiltonian& h, double beta);

/// Entropy of the Gaussian state restricted to the modes `sites`.
EntropyValue gaussian_entropy(const MajoranaCovariance& m, const std::vector<int>& sites);

/// S_A + S_B - S_{AB} for disjoint mode sets.
EntropyValue gaussian_mutual(const MajoranaCovariance& m, const std::vector<int>& a, const std::vector<int>& b);

struct ScanPoint {
  int sites = 0;
  double mutual = 0.0;
  bool zero_modes = false;
  bool mu_shifted = false;  // chemical potential moved by 1e-9 to lift zero modes
};

struct ScanSeries {
  double beta = 0.0;
  std::vector<ScanPoint> points;
  double bound = 0.0;  // 2 beta ||W_LR|| (inf at beta = inf)
  bool increasing = false;
  bool saturated = false;
  std::optional<int> saturated_at;
  bool below_bound = true;
  std::string label;
};

struct ThermalDestructionScan {
  double coupling_norm = 0.0;  // ||W_LR||
  std::vector<ScanSeries> series;
};

/// Half-half mutual information of open chains over a ladder of lengths for
/// each beta (beta may be +inf). Saturation is a successive difference below
/// `saturation_tol`.
ThermalDestructionScan thermal_destruction_scan(const ModelSpec& model, const std::vector<double>& betas,
                                                const std::vector<int>& ladder, double saturation_tol = 1e-3);

}  // namespace arealaw
