#pragma once

// Checks of the thermodynamic inequalities and identities on finite windows.
// Every conditional quantity uses the window complement W \ I in place of the
// infinite exterior; reports carry the window so the truncation stays visible.

#include "arealaw/entropy.hpp"
#include "arealaw/potential.hpp"
#include "arealaw/random.hpp"
#include "arealaw/states.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arealaw {

/// F_I(psi) = psi(H~_I) - S_{I|W\I}(psi) / beta for a state on the whole window.
double conditional_free_energy(const DensityState& psi, const Region& i, const Potential& phi, double beta);

struct LTSTrial {
  int id = 0;
  std::string kind;
  double free_energy = 0.0;
  double margin = 0.0;  // F_I(psi) - F_I(phi)
};

struct LTSReport {
  double free_energy = 0.0;  // F_I(phi)
  std::vector<LTSTrial> trials;
  double min_margin = 0.0;
};

/// Trial 0 is the identity channel, trial 1 the depolarizing channel on I,
/// the rest are drawn by random_channel. A trial that moves the exterior
/// marginal throws InvariantViolation.
LTSReport lts_check(const DensityState& phi_state, const Region& i, const Potential& phi, double beta,
                    int n_trials, Rng& rng);

struct AreaLawReport {
  double mutual = 0.0;             // I(A : W\A)
  double mutual_relative = 0.0;    // S(phi | phi_A (x) phi_{W\A})
  double energy_gap_term = 0.0;    // beta (phi_A (x) phi_{W\A} - phi)(H_dA)
  double norm_bound = 0.0;         // 2 beta ||H_dA||
  double geometric_bound = 0.0;    // 2 beta c_Phi |dA|
  double mutual_sub = 0.0;         // I(A : B) for B = W\A minus its farthest site
  int boundary_terms = 0;          // |dA|
  double slack1 = 0.0;             // energy_gap_term - mutual
  double slack2 = 0.0;             // norm_bound - energy_gap_term
  double geometric_slack = 0.0;    // geometric_bound - norm_bound
  double monotone_slack = 0.0;     // mutual - mutual_sub
  double route_gap = 0.0;          // |mutual - mutual_relative|
  double free_energy_slack = 0.0;  // F(phi_A (x) phi_{W\A}) - F(phi)
  bool truncated = false;
};

/// Area-law chain for the window Gibbs state. The spectrum overload reuses one
/// diagonalization across temperatures.
AreaLawReport area_law_chain(const Potential& phi, double beta, const Window& w, const Region& a);
AreaLawReport area_law_chain(const HamiltonianSpectrum& h, const Potential& phi, double beta, const Region& a);

struct GibbsConditionReport {
  double residual_a = 0.0;  // ||[phi^{beta H_dI}]_I - gibbs_I||_1
  double residual_b = 0.0;  // ||[phi^{beta H_dI}] - gibbs_I (x) (.)_{W\I}||_1
  bool truncated = false;
};
GibbsConditionReport gibbs_condition_check(const Potential& phi, double beta, const Window& w, const Region& i);
GibbsConditionReport gibbs_condition_check(const HamiltonianSpectrum& h, const Potential& phi, double beta,
                                           const Region& i);

struct HalvesProductReport {
  double residual = 0.0;  // ||[phi^{beta W_LR}] - gibbs_L (x) gibbs_R||_1
  double coupling_norm = 0.0;
};
HalvesProductReport araki_gibbs_halves_check(const Potential& phi, double beta, const Window& w, int cut);
HalvesProductReport araki_gibbs_halves_check(const HamiltonianSpectrum& h, const Potential& phi, double beta,
                                             int cut);

struct DynamicsReport {
  std::vector<std::pair<double, double>> residuals;  // (t, ||U_t - U_t^L (x) U_t^R||)
  double max_residual = 0.0;
  bool generators_even = true;  // H_L, H_R even (always true for spins)
};
DynamicsReport decoupled_dynamics_check(const Potential& phi, const Window& w, int cut,
                                        const std::vector<double>& times = {0.1, 0.5, 1.0});

struct PerturbationReport {
  double shift = 0.0;           // [w^h](h) - w(h)
  double forward = 0.0;         // S([w^h] | w)
  double backward = 0.0;        // S(w | [w^h])
  double h_norm = 0.0;
  double slack_forward = 0.0;   // shift - forward
  double slack_shift = 0.0;     // 2||h|| - shift
  double slack_backward = 0.0;  // 2||h|| - backward
};
/// h is given in the representation of the state.
PerturbationReport perturbation_bound_check(const DensityState& omega, const Matrix& h);

struct CorrelationReport {
  double covariance = 0.0;  // |phi(O_A O_B) - phi(O_A) phi(O_B)|
  double bound = 0.0;       // 2 sqrt(beta ||H_dA||)
  double slack = 0.0;
  double distance = 0.0;    // ||phi_A (x) phi_{W\A} - phi||_1
  double pinsker_slack = 0.0;  // 4 beta ||H_dA|| - distance^2
};
/// O_A supported in A, O_B in W\A, both of norm at most 1 (even for fermions).
CorrelationReport correlation_estimate_check(const Potential& phi, double beta, const Window& w, const Region& a,
                                             const LocalOperator& o_a, const LocalOperator& o_b);

struct GroundStateReport {
  bool skipped = false;
  std::string warning;
  int degeneracy = 1;
  double gap = 0.0;
  double mutual = 0.0;   // I(A : W\A)
  double entropy = 0.0;  // S_A
  double residual = 0.0;  // |I - 2 S_A|
  std::vector<std::pair<int, double>> entropy_ladder;  // (|prefix|, S_prefix)
};
GroundStateReport ground_state_mutual_check(const Potential& phi, const Window& w, const Region& a);
GroundStateReport ground_state_mutual_check(const HamiltonianSpectrum& h, const Region& a);

struct HalvesSeriesPoint {
  int half = 0;               // k: window [-k, k-1]
  double mutual = 0.0;        // I(left : right)
  double donald = 0.0;        // S(phi | gibbs_L (x) gibbs_R)
  double donald_residual = 0.0;
};

struct HalvesSeries {
  std::vector<HalvesSeriesPoint> points;
  ConvergenceSeries series;  // mutual against window size
  double bound = 0.0;        // 2 beta ||W_LR||
  double max_excess = 0.0;   // max over points of max(mutual, donald) - bound
};

/// Half-chain mutual entropy on symmetric windows [-k, k-1] cut at 0.
HalvesSeries halves_mutual_series(const Potential& phi, double beta, const std::vector<int>& halves,
                                  double tolerance = 1e-4);

}  // namespace arealaw
