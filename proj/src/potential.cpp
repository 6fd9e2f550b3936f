#include "arealaw/potential.hpp"

#include "arealaw/detail/materialize.hpp"
#include "arealaw/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace arealaw {

namespace {

int degree(Generator g) {
  switch (g) {
    case Generator::C:
    case Generator::Cdag: return 1;
    case Generator::N: return 2;
    default: return 0;
  }
}

Region base_region(const BaseTerm& b, Statistics s) {
  const Window w(0, b.base_set.back(), s);
  return Region(b.base_set, w);
}

}  // namespace

Potential::Potential(Statistics statistics, std::vector<BaseTerm> base_terms)
    : statistics_(statistics), base_terms_(std::move(base_terms)) {
  for (auto& b : base_terms_) {
    std::sort(b.base_set.begin(), b.base_set.end());
    b.base_set.erase(std::unique(b.base_set.begin(), b.base_set.end()), b.base_set.end());
    if (b.base_set.empty() || b.base_set.front() != 0) {
      throw PreconditionError("base set must be anchored with minimum 0");
    }
    for (const auto& m : b.monomials) {
      for (const auto& f : m.factors) {
        if (!std::binary_search(b.base_set.begin(), b.base_set.end(), f.offset)) {
          throw PreconditionError("monomial factor outside its base set");
        }
      }
    }
    range_ = std::max(range_, b.base_set.back());
  }
  for (std::size_t i = 0; i < base_terms_.size(); ++i) {
    const Region rep = base_region(base_terms_[i], statistics_);
    const Matrix term = materialize({TermInstance{i, 0}}, rep);
    if (!linalg::is_hermitian(term, 1e-12)) throw ContractError("potential term is not Hermitian");
    if (statistics_ == Statistics::Fermion && classify_parity(term, statistics_) != Parity::Even) {
      throw ContractError("fermionic potential term is not even");
    }
  }
}

std::vector<int> Potential::sites(const TermInstance& t) const {
  std::vector<int> s = base_terms_.at(t.base_index).base_set;
  for (int& x : s) x += t.shift;
  return s;
}

bool Potential::allowed(const TermInstance& t) const {
  if (!cut_) return true;
  const auto& set = base_terms_[t.base_index].base_set;
  return !(set.front() + t.shift < *cut_ && set.back() + t.shift >= *cut_);
}

std::vector<TermInstance> Potential::instances_within(const Region& region) const {
  std::vector<TermInstance> out;
  if (region.empty()) return out;
  const int lo = region.sites().front();
  const int hi = region.sites().back();
  for (std::size_t b = 0; b < base_terms_.size(); ++b) {
    const int span = base_terms_[b].base_set.back();
    for (int x = lo; x + span <= hi; ++x) {
      TermInstance t{b, x};
      if (!allowed(t)) continue;
      const auto s = sites(t);
      if (std::all_of(s.begin(), s.end(), [&](int site) { return region.contains(site); })) out.push_back(t);
    }
  }
  return out;
}

std::vector<TermInstance> Potential::instances_in_interval(int lo, int hi) const {
  std::vector<TermInstance> out;
  for (std::size_t b = 0; b < base_terms_.size(); ++b) {
    const int span = base_terms_[b].base_set.back();
    for (int x = lo; x + span <= hi; ++x) {
      TermInstance t{b, x};
      if (allowed(t)) out.push_back(t);
    }
  }
  return out;
}

std::vector<TermInstance> Potential::instances_meeting(const Region& region) const {
  std::vector<TermInstance> out;
  if (region.empty()) return out;
  const int lo = region.sites().front();
  const int hi = region.sites().back();
  for (std::size_t b = 0; b < base_terms_.size(); ++b) {
    const int span = base_terms_[b].base_set.back();
    for (int x = lo - span; x <= hi; ++x) {
      TermInstance t{b, x};
      if (!allowed(t)) continue;
      const auto s = sites(t);
      if (std::any_of(s.begin(), s.end(), [&](int site) { return region.contains(site); })) out.push_back(t);
    }
  }
  return out;
}

Matrix Potential::materialize(const std::vector<TermInstance>& terms, const Region& rep) const {
  if (rep.statistics() != statistics_) throw PreconditionError("statistics mismatch between potential and window");
  if (static_cast<int>(rep.size()) > kMaxWindowSites) throw ResourceError("materialization exceeds the dense cap");
  const int n = static_cast<int>(rep.size());
  detail::PauliSum total(n);
  for (const auto& t : terms) {
    const auto& b = base_terms_.at(t.base_index);
    for (const auto& m : b.monomials) {
      detail::PauliSum prod = detail::PauliSum::identity(n, m.coefficient);
      for (const auto& f : m.factors) {
        if (f.generator == Generator::Identity) continue;
        const int site = f.offset + t.shift;
        prod = prod * detail::generator_string(n, rep.rank(site), statistics_, f.generator);
      }
      total += prod;
    }
  }
  total.prune(0.0);
  return total.dense();
}

Potential Potential::decoupled(int cut) const {
  Potential p = *this;
  p.cut_ = cut;
  return p;
}

double Potential::max_term_norm() const {
  double c = 0.0;
  for (std::size_t i = 0; i < base_terms_.size(); ++i) {
    const Region rep = base_region(base_terms_[i], statistics_);
    c = std::max(c, linalg::spectral_norm_hermitian(materialize({TermInstance{i, 0}}, rep)));
  }
  return c;
}

bool Potential::is_quadratic() const {
  if (statistics_ != Statistics::Fermion) return false;
  for (const auto& b : base_terms_) {
    for (const auto& m : b.monomials) {
      int d = 0;
      for (const auto& f : m.factors) d += degree(f.generator);
      if (d != 0 && d != 2) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------- catalog

namespace {

void push_if_nonzero(std::vector<Monomial>& ms, cplx c, std::vector<Factor> f) {
  if (c != cplx(0.0)) ms.push_back({c, std::move(f)});
}

std::vector<BaseTerm> drop_empty(std::vector<BaseTerm> terms) {
  std::erase_if(terms, [](const BaseTerm& b) { return b.monomials.empty(); });
  return terms;
}

// shortest text that reads back to the same double
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_finite(std::initializer_list<double> vs) {
  for (double v : vs) {
    if (!std::isfinite(v)) throw PreconditionError("model parameters must be finite");
  }
}

}  // namespace

std::string model_name(const ModelSpec& m) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Tfim>) return "tfim";
        else if constexpr (std::is_same_v<T, Xxz>) return "xxz";
        else return "kitaev";
      },
      m);
}

std::string model_label(const ModelSpec& m) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Tfim>) return "tfim(J=" + fmt(x.J) + ";g=" + fmt(x.g) + ")";
        else if constexpr (std::is_same_v<T, Xxz>)
          return "xxz(Jxy=" + fmt(x.Jxy) + ";Jz=" + fmt(x.Jz) + ";h=" + fmt(x.h) + ")";
        else return "kitaev(t=" + fmt(x.t) + ";delta=" + fmt(x.delta) + ";mu=" + fmt(x.mu) + ")";
      },
      m);
}

Statistics model_statistics(const ModelSpec& m) {
  return std::holds_alternative<Kitaev>(m) ? Statistics::Fermion : Statistics::Spin;
}

Potential make_potential(const ModelSpec& m) {
  using G = Generator;
  if (const auto* p = std::get_if<Tfim>(&m)) {
    require_finite({p->J, p->g});
    BaseTerm site{{0}, {}};
    push_if_nonzero(site.monomials, -p->g, {{0, G::X}});
    BaseTerm bond{{0, 1}, {}};
    push_if_nonzero(bond.monomials, -p->J, {{0, G::Z}, {1, G::Z}});
    return Potential(Statistics::Spin, drop_empty({site, bond}));
  }
  if (const auto* p = std::get_if<Xxz>(&m)) {
    require_finite({p->Jxy, p->Jz, p->h});
    BaseTerm site{{0}, {}};
    push_if_nonzero(site.monomials, -p->h / 2.0, {{0, G::Z}});
    BaseTerm bond{{0, 1}, {}};
    push_if_nonzero(bond.monomials, p->Jxy / 4.0, {{0, G::X}, {1, G::X}});
    push_if_nonzero(bond.monomials, p->Jxy / 4.0, {{0, G::Y}, {1, G::Y}});
    push_if_nonzero(bond.monomials, p->Jz / 4.0, {{0, G::Z}, {1, G::Z}});
    return Potential(Statistics::Spin, drop_empty({site, bond}));
  }
  const auto& k = std::get<Kitaev>(m);
  require_finite({k.t, k.delta, k.mu});
  BaseTerm site{{0}, {}};
  push_if_nonzero(site.monomials, -k.mu, {{0, G::N}});
  push_if_nonzero(site.monomials, k.mu / 2.0, {});
  BaseTerm bond{{0, 1}, {}};
  push_if_nonzero(bond.monomials, -k.t, {{0, G::Cdag}, {1, G::C}});
  push_if_nonzero(bond.monomials, -k.t, {{1, G::Cdag}, {0, G::C}});
  push_if_nonzero(bond.monomials, k.delta, {{0, G::C}, {1, G::C}});
  push_if_nonzero(bond.monomials, k.delta, {{1, G::Cdag}, {0, G::Cdag}});
  return Potential(Statistics::Fermion, drop_empty({site, bond}));
}

std::vector<CatalogEntry> model_catalog() {
  return {
      {"tfim", Statistics::Spin, {"J", "g"}, "-J sum Z_i Z_{i+1} - g sum X_i"},
      {"xxz", Statistics::Spin, {"Jxy", "Jz", "h"},
       "Jxy sum (X_i X_{i+1} + Y_i Y_{i+1})/4 + Jz sum Z_i Z_{i+1}/4 - h sum Z_i/2"},
      {"kitaev", Statistics::Fermion, {"t", "delta", "mu"},
       "sum [-t (c_i^+ c_{i+1} + h.c.) + delta (c_i c_{i+1} + h.c.) - mu (n_i - 1/2)]"},
  };
}

ModelSpec make_model(const std::string& name, const std::vector<std::pair<std::string, double>>& params) {
  auto apply = [&](auto model, auto&& setter) {
    for (const auto& [key, value] : params) {
      if (!setter(model, key, value)) throw PreconditionError("unknown parameter '" + key + "' for model " + name);
    }
    return ModelSpec{model};
  };
  if (name == "tfim") {
    return apply(Tfim{}, [](Tfim& m, const std::string& k, double v) {
      if (k == "J") m.J = v;
      else if (k == "g") m.g = v;
      else return false;
      return true;
    });
  }
  if (name == "xxz") {
    return apply(Xxz{}, [](Xxz& m, const std::string& k, double v) {
      if (k == "Jxy") m.Jxy = v;
      else if (k == "Jz") m.Jz = v;
      else if (k == "h") m.h = v;
      else return false;
      return true;
    });
  }
  if (name == "kitaev") {
    return apply(Kitaev{}, [](Kitaev& m, const std::string& k, double v) {
      if (k == "t") m.t = v;
      else if (k == "delta") m.delta = v;
      else if (k == "mu") m.mu = v;
      else return false;
      return true;
    });
  }
  throw PreconditionError("unknown model '" + name + "'");
}

// ------------------------------------------------------------- Hamiltonians

LocalOperator inner_hamiltonian(const Potential& phi, const Region& region) {
  const Region whole = Region::whole(region.window());
  return LocalOperator(phi.materialize(phi.instances_within(region), whole), region);
}

Matrix local_hamiltonian(const Potential& phi, const Region& region) {
  return phi.materialize(phi.instances_within(region), region);
}

SurfaceEnergy surface_energy(const Potential& phi, const Region& region) {
  const Window& w = region.window();
  std::vector<TermInstance> crossing;
  std::vector<int> boundary;
  bool truncated = false;
  for (const auto& t : phi.instances_meeting(region)) {
    const auto s = phi.sites(t);
    const bool leaves = std::any_of(s.begin(), s.end(), [&](int x) { return !region.contains(x); });
    if (!leaves) continue;
    if (std::any_of(s.begin(), s.end(), [&](int x) { return !w.contains(x); })) {
      truncated = true;
      continue;
    }
    crossing.push_back(t);
    boundary.insert(boundary.end(), s.begin(), s.end());
  }
  Region bnd(std::move(boundary), w);
  LocalOperator op(phi.materialize(crossing, Region::whole(w)), bnd);
  return {std::move(op), std::move(bnd), static_cast<int>(crossing.size()), truncated};
}

LocalOperator open_hamiltonian(const Potential& phi, const Region& region) {
  return inner_hamiltonian(phi, region) + surface_energy(phi, region).op;
}

HalfChainCoupling half_chain_coupling(const Potential& phi, int cut, const Window& w) {
  const int d = phi.range();
  if (d > 0 && (cut - d < w.lo() || cut + d - 1 > w.hi())) {
    throw PreconditionError("cut needs d(Phi) clearance inside the window");
  }
  std::vector<TermInstance> crossing;
  std::vector<int> support;
  for (const auto& t : phi.instances_within(Region::whole(w))) {
    const auto s = phi.sites(t);
    if (s.front() < cut && s.back() >= cut) {
      crossing.push_back(t);
      support.insert(support.end(), s.begin(), s.end());
    }
  }
  Region sup(std::move(support), w);
  LocalOperator op(phi.materialize(crossing, Region::whole(w)), sup);
  const double norm = crossing.empty() ? 0.0 : linalg::spectral_norm_hermitian(phi.materialize(crossing, sup));
  return {std::move(op), norm};
}

}  // namespace arealaw
