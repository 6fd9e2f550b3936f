#include "arealaw/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace arealaw {

namespace {

constexpr double kSupportWeight = 1e-10;

void require_disjoint(const Region& a, const Region& b) {
  if (!(a.window() == b.window())) throw PreconditionError("regions belong to different windows");
  if (!a.disjoint(b)) throw PreconditionError("regions " + to_string(a) + " and " + to_string(b) + " overlap");
}

double reduced_entropy(const DensityState& rho, const Region& a) {
  if (a.empty()) return 0.0;
  return entropy(reduce(rho, a));
}

int distance(int site, const Region& r) {
  int d = std::numeric_limits<int>::max();
  for (int s : r.sites()) d = std::min(d, std::abs(s - site));
  return d;
}

}  // namespace

void assess(ConvergenceSeries& s, double slack) {
  s.monotone = true;
  s.converged = false;
  s.converged_at.reset();
  const double sign = s.direction == ConvergenceSeries::Direction::NonIncreasing ? 1.0 : -1.0;
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const double step = s.points[k].second - s.points[k - 1].second;
    if (sign * step > slack) s.monotone = false;
    if (std::abs(step) < s.tolerance) {
      if (!s.converged_at) s.converged_at = s.points[k].first;
    } else {
      s.converged_at.reset();
    }
  }
  s.converged = s.converged_at.has_value();
}

double entropy(const DensityState& rho) { return linalg::entropy_of_spectrum(rho.eigenvalues()); }

EntropyValue von_neumann(const DensityState& rho, const Region& a) { return {reduced_entropy(rho, a), false}; }

EntropyValue relative_entropy(const DensityState& rho, const DensityState& sigma) {
  if (!(rho.support() == sigma.support())) {
    throw PreconditionError("relative entropy needs states on the same support");
  }
  const double s_rho = entropy(rho);
  double cross = 0.0;  // Tr rho log sigma
  if (sigma.cached_log()) {
    cross = linalg::trace_product(rho.matrix(), *sigma.cached_log()).real();
  } else if (sigma.faithful()) {
    // certified full rank: eigenvalues below the threshold are rounding noise
    cross = linalg::trace_product(rho.matrix(), sigma.log_matrix()).real();
  } else {
    const linalg::EigenSystem es = linalg::eigh(sigma.matrix());
    const Matrix v = es.complex_vectors();
    // weights w_k = <v_k| rho |v_k>
    const Matrix rv = rho.matrix() * v;
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      const double w = v.col(k).dot(rv.col(k)).real();
      const double s = es.values(k);
      if (s < kFaithfulThreshold) {
        if (w > kSupportWeight) return {kInfiniteEntropy, true};
        continue;  // 0 log 0 convention for the negligible remainder
      }
      cross += w * std::log(s);
    }
  }
  return {-s_rho - cross, false};
}

EntropyValue conditional_entropy(const DensityState& rho, const Region& i, const Region& j) {
  require_disjoint(i, j);
  if (j.empty()) return von_neumann(rho, i);
  const DensityState rij = reduce(rho, i.united(j));
  return {entropy(rij) - reduced_entropy(rij, j), false};
}

ConvergenceSeries conditional_entropy_limit(const DensityState& rho, const Region& i, double tolerance,
                                            double slack) {
  const Region& sup = rho.support();
  if (!sup.contains(i) || i.empty()) throw PreconditionError("conditioned region must be a non-empty part of the support");
  ConvergenceSeries series;
  series.tolerance = tolerance;
  series.direction = ConvergenceSeries::Direction::NonIncreasing;
  series.points.emplace_back(0, reduced_entropy(rho, i));
  const Region rest = sup.minus(i);
  std::size_t last = 0;
  for (int k = 1; last < rest.size(); ++k) {
    std::vector<int> sites;
    for (int s : rest.sites())
      if (distance(s, i) <= k) sites.push_back(s);
    if (sites.size() == last) continue;
    last = sites.size();
    const Region lam(sites, sup.window());
    series.points.emplace_back(static_cast<int>(lam.size()), conditional_entropy(rho, i, lam).nats);
  }
  assess(series, slack);
  if (!series.monotone) throw InvariantViolation("conditional entropy increased along the exhausting ladder");
  return series;
}

EntropyValue mutual_entropy(const DensityState& rho, const Region& a, const Region& b) {
  require_disjoint(a, b);
  if (a.empty() || b.empty()) return {0.0, false};
  const DensityState rab = reduce(rho, a.united(b));
  return {reduced_entropy(rab, a) + reduced_entropy(rab, b) - entropy(rab), false};
}

EntropyValue mutual_entropy_relative(const DensityState& rho, const Region& a, const Region& b) {
  require_disjoint(a, b);
  if (a.empty() || b.empty()) return {0.0, false};
  const DensityState rab = reduce(rho, a.united(b));
  const DensityState prod = product_extend(reduce(rab, a), reduce(rab, b));
  return relative_entropy(rab, prod);
}

DonaldReport donald_decompose(const DensityState& w, const DensityState& rho_l, const DensityState& rho_r) {
  const Region& l = rho_l.support();
  const Region& r = rho_r.support();
  require_disjoint(l, r);
  if (!(l.united(r) == w.support())) throw PreconditionError("Donald decomposition needs a partition of the support");
  if (!w.faithful() || !rho_l.faithful() || !rho_r.faithful()) {
    throw DomainError("Donald decomposition needs faithful states");
  }
  DonaldReport out;
  const DensityState wl = reduce(w, l);
  const DensityState wr = reduce(w, r);
  out.mutual = entropy(wl) + entropy(wr) - entropy(w);
  out.relative = relative_entropy(w, product_extend(rho_l, rho_r)).nats;
  out.left = relative_entropy(wl, rho_l).nats;
  out.right = relative_entropy(wr, rho_r).nats;
  out.residual = std::abs(out.relative - out.mutual - out.left - out.right);
  return out;
}

double trace_distance(const DensityState& rho, const DensityState& sigma) {
  if (!(rho.support() == sigma.support())) throw PreconditionError("trace distance needs states on the same support");
  return linalg::trace_norm(rho.matrix() - sigma.matrix());
}

double pinsker_gap(const DensityState& rho, const DensityState& sigma) {
  const EntropyValue s = relative_entropy(rho, sigma);
  if (s.infinite()) return kInfiniteEntropy;
  const double t = trace_distance(rho, sigma);
  return 2.0 * s.nats - t * t;
}

double ssa_gap(const DensityState& rho, const Region& x, const Region& y) {
  return reduced_entropy(rho, x) + reduced_entropy(rho, y) - reduced_entropy(rho, x.intersected(y)) -
         reduced_entropy(rho, x.united(y));
}

double EntropyBoundsReport::min_slack() const {
  double m = std::min({triangle_slack, twice_slack, monotone_slack});
  for (double c : chain_slacks) m = std::min(m, c);
  return m;
}

EntropyBoundsReport entropy_bounds_check(const DensityState& rho, const Region& i, const Region& j,
                                         std::optional<Region> j_sub) {
  require_disjoint(i, j);
  EntropyBoundsReport rep;
  if (rho.statistics() == Statistics::Fermion && !is_even(rho).even) {
    rep.skipped = true;
    rep.warning = "state is not even; entropy bounds are not guaranteed";
    return rep;
  }
  if (!j_sub) {
    std::vector<int> s = j.sites();
    if (!s.empty()) {
      auto far = std::max_element(s.begin(), s.end(), [&](int a, int b) { return distance(a, i) < distance(b, i); });
      s.erase(far);
    }
    j_sub = Region(s, j.window());
  }
  if (!j.contains(*j_sub)) throw PreconditionError("J_sub must lie inside J");
  const Region outside = rho.support().minus(i);

  rep.entropy_i = reduced_entropy(rho, i);
  rep.conditional = conditional_entropy(rho, i, j).nats;
  rep.mutual = mutual_entropy(rho, i, j).nats;
  rep.mutual_sub = mutual_entropy(rho, i, *j_sub).nats;
  rep.triangle_slack = rep.entropy_i - std::abs(rep.conditional);
  rep.twice_slack = 2.0 * rep.entropy_i - rep.mutual;
  rep.monotone_slack = rep.mutual - rep.mutual_sub;

  const double c_sub = conditional_entropy(rho, i, *j_sub).nats;
  const double c_all = conditional_entropy(rho, i, outside).nats;
  rep.chain_slacks = {rep.entropy_i - c_sub, c_sub - rep.conditional, rep.conditional - c_all};
  return rep;
}

}  // namespace arealaw
