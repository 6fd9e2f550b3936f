#pragma once

// Translation-invariant finite-range potentials and the Hamiltonians built
// from them on finite windows.

#include "arealaw/lattice.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace arealaw {

struct Factor {
  int offset;
  Generator generator;
};

/// coefficient * (ordered product of factors). An empty factor list is the
/// identity.
struct Monomial {
  cplx coefficient;
  std::vector<Factor> factors;
};

/// Interaction anchored at the origin: base_set has minimum 0 and every factor
/// offset lies in base_set. The term at shift x acts on base_set + x.
struct BaseTerm {
  std::vector<int> base_set;
  std::vector<Monomial> monomials;
};

/// One translate Phi(K) of a base term.
struct TermInstance {
  std::size_t base_index;
  int shift;
};

class Potential {
 public:
  /// Validates Hermiticity of every term and, for fermions, evenness.
  Potential(Statistics statistics, std::vector<BaseTerm> base_terms);

  Statistics statistics() const { return statistics_; }
  const std::vector<BaseTerm>& base_terms() const { return base_terms_; }

  /// d(Phi): largest diameter among base sets.
  int range() const { return range_; }

  /// Set for Phi_{L,R}: terms straddling the cut are removed.
  std::optional<int> decoupling_cut() const { return cut_; }

  std::vector<int> sites(const TermInstance& t) const;

  /// Translates K with K inside `region`.
  std::vector<TermInstance> instances_within(const Region& region) const;

  /// Translates K inside the site interval [lo, hi]; no window needed, so
  /// this also serves chains too long for dense operators.
  std::vector<TermInstance> instances_in_interval(int lo, int hi) const;

  /// Translates K meeting `region`, including those reaching outside the window.
  std::vector<TermInstance> instances_meeting(const Region& region) const;

  /// Sum of the given terms in the canonical representation of `rep`.
  Matrix materialize(const std::vector<TermInstance>& terms, const Region& rep) const;

  /// Phi_{L,R} for Z_L = sites < cut, Z_R = sites >= cut.
  Potential decoupled(int cut) const;

  /// max over base terms of ||Phi(K)||.
  double max_term_norm() const;

  /// True when every monomial is of degree 0 or 2 in c, c^dagger.
  bool is_quadratic() const;

 private:
  bool allowed(const TermInstance& t) const;

  Statistics statistics_;
  std::vector<BaseTerm> base_terms_;
  int range_ = 0;
  std::optional<int> cut_;
};

// ------------------------------------------------------------- catalog

/// H = -J sum Z_i Z_{i+1} - g sum X_i
struct Tfim {
  double J = 1.0;
  double g = 1.0;
};
/// H = Jxy sum (X X + Y Y)/4 + Jz sum Z Z / 4 - h sum Z / 2
struct Xxz {
  double Jxy = 1.0;
  double Jz = 0.5;
  double h = 0.3;
};
/// H = sum [-t (c_i^+ c_{i+1} + h.c.) + Delta (c_i c_{i+1} + h.c.) - mu (n_i - 1/2)]
struct Kitaev {
  double t = 1.0;
  double delta = 1.0;
  double mu = 0.5;
};
using ModelSpec = std::variant<Tfim, Xxz, Kitaev>;

std::string model_name(const ModelSpec& m);
/// name(p1=..,p2=..) with 17 significant digits.
std::string model_label(const ModelSpec& m);
Statistics model_statistics(const ModelSpec& m);
Potential make_potential(const ModelSpec& m);

struct CatalogEntry {
  std::string name;
  Statistics statistics;
  std::vector<std::string> parameters;
  std::string hamiltonian;
};
std::vector<CatalogEntry> model_catalog();

/// Build a ModelSpec from a catalog name and named parameters (missing ones
/// take the defaults above). Throws PreconditionError on unknown names.
ModelSpec make_model(const std::string& name, const std::vector<std::pair<std::string, double>>& params);

// ------------------------------------------------------------- Hamiltonians

/// H_I = sum_{K subset I} Phi(K), full window dimension.
LocalOperator inner_hamiltonian(const Potential& phi, const Region& region);

/// H_I in the canonical representation of I (dimension 2^|I|).
Matrix local_hamiltonian(const Potential& phi, const Region& region);

struct SurfaceEnergy {
  LocalOperator op;
  Region boundary;         // union of supports of crossing terms
  int crossing_terms = 0;  // number of translates K meeting both I and I^c
  bool truncated = false;  // some crossing term leaves the window
};

/// H_dI: terms meeting both I and its complement, restricted to the window.
SurfaceEnergy surface_energy(const Potential& phi, const Region& region);

/// H~_I = H_I + H_dI.
LocalOperator open_hamiltonian(const Potential& phi, const Region& region);

struct HalfChainCoupling {
  LocalOperator op;
  double norm = 0.0;
};

/// W_LR across `cut` (Z_L = sites < cut). Requires d(Phi) clearance inside w.
HalfChainCoupling half_chain_coupling(const Potential& phi, int cut, const Window& w);

}  // namespace arealaw
