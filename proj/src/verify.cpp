#include "arealaw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arealaw {

namespace {

cplx expect(const DensityState& rho, const Matrix& op) { return linalg::trace_product(rho.matrix(), op); }

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and positive");
}

const Region& require_whole(const HamiltonianSpectrum& h) {
  if (h.region.size() != static_cast<std::size_t>(h.region.window().size())) {
    throw PreconditionError("check needs the Hamiltonian of the whole window");
  }
  return h.region;
}

// Drops the site of `r` farthest from `from`.
Region without_farthest(const Region& r, const Region& from) {
  std::vector<int> s = r.sites();
  auto dist = [&](int x) {
    int d = std::numeric_limits<int>::max();
    for (int y : from.sites()) d = std::min(d, std::abs(x - y));
    return d;
  };
  auto far = std::max_element(s.begin(), s.end(), [&](int a, int b) { return dist(a) < dist(b); });
  if (far != s.end()) s.erase(far);
  return Region(s, r.window());
}

}  // namespace

double conditional_free_energy(const DensityState& psi, const Region& i, const Potential& phi, double beta) {
  require_beta(beta);
  const Region whole = Region::whole(psi.window());
  if (!(psi.support() == whole)) throw PreconditionError("conditional free energy needs a state on the whole window");
  const Matrix h = open_hamiltonian(phi, i).matrix();
  const double cond = entropy(psi) - von_neumann(psi, i.complement()).nats;
  return psi.expectation(h) - cond / beta;
}

LTSReport lts_check(const DensityState& phi_state, const Region& i, const Potential& phi, double beta, int n_trials,
                    Rng& rng) {
  require_beta(beta);
  const Region whole = Region::whole(phi_state.window());
  if (!(phi_state.support() == whole)) throw PreconditionError("LTS check needs a state on the whole window");
  const Matrix h = open_hamiltonian(phi, i).matrix();
  const Region exterior = i.complement();
  auto free_energy_of = [&](const DensityState& psi) {
    const double cond = entropy(psi) - von_neumann(psi, exterior).nats;
    return psi.expectation(h) - cond / beta;
  };
  LTSReport rep;
  rep.free_energy = free_energy_of(phi_state);
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_trials; ++k) {
    std::string kind;
    Channel ch = k == 0   ? (kind = "identity", Channel::identity(i))
                 : k == 1 ? (kind = "depolarizing", Channel::depolarizing(i))
                          : (kind = "random", random_channel(i, rng));
    const DensityState psi = lts_trial(phi_state, ch);
    const double f = free_energy_of(psi);
    rep.trials.push_back({k, kind, f, f - rep.free_energy});
    rep.min_margin = std::min(rep.min_margin, f - rep.free_energy);
  }
  if (rep.trials.empty()) rep.min_margin = 0.0;
  return rep;
}

AreaLawReport area_law_chain(const Potential& phi, double beta, const Window& w, const Region& a) {
  return area_law_chain(diagonalize(phi, Region::whole(w)), phi, beta, a);
}

AreaLawReport area_law_chain(const HamiltonianSpectrum& h, const Potential& phi, double beta, const Region& a) {
  require_beta(beta);
  require_whole(h);
  if (a.empty() || a.size() == h.region.size()) throw PreconditionError("area-law region must be a proper part of the window");
  const DensityState g = gibbs_state(h, beta);
  const Region rest = a.complement();
  const SurfaceEnergy se = surface_energy(phi, a);
  const DensityState ga = reduce(g, a);
  const DensityState gr = reduce(g, rest);
  const DensityState prod = product_extend(ga, gr);

  AreaLawReport rep;
  rep.truncated = se.truncated;
  rep.boundary_terms = se.crossing_terms;
  const double s_a = entropy(ga), s_r = entropy(gr), s = entropy(g);
  rep.mutual = s_a + s_r - s;
  rep.mutual_relative = relative_entropy(g, prod).nats;
  rep.route_gap = std::abs(rep.mutual - rep.mutual_relative);
  const Matrix& hd = se.op.matrix();
  rep.energy_gap_term = beta * (prod.expectation(hd) - g.expectation(hd));
  rep.norm_bound = 2.0 * beta * linalg::spectral_norm_hermitian(hd);
  rep.geometric_bound = 2.0 * beta * phi.max_term_norm() * se.crossing_terms;
  rep.slack1 = rep.energy_gap_term - rep.mutual;
  rep.slack2 = rep.norm_bound - rep.energy_gap_term;
  rep.geometric_slack = rep.geometric_bound - rep.norm_bound;
  rep.mutual_sub = rest.size() > 1 ? mutual_entropy(g, a, without_farthest(rest, a)).nats : 0.0;
  rep.monotone_slack = rep.mutual - rep.mutual_sub;
  const double f_prod = prod.expectation(h.hamiltonian) - (s_a + s_r) / beta;
  const double f_gibbs = g.expectation(h.hamiltonian) - s / beta;
  rep.free_energy_slack = f_prod - f_gibbs;
  return rep;
}

GibbsConditionReport gibbs_condition_check(const Potential& phi, double beta, const Window& w, const Region& i) {
  return gibbs_condition_check(diagonalize(phi, Region::whole(w)), phi, beta, i);
}

GibbsConditionReport gibbs_condition_check(const HamiltonianSpectrum& h, const Potential& phi, double beta,
                                           const Region& i) {
  require_beta(beta);
  require_whole(h);
  const SurfaceEnergy se = surface_energy(phi, i);
  const DensityState psi = perturb(gibbs_state(h, beta), Matrix(beta * se.op.matrix()));
  const DensityState gi = gibbs_state(phi, i, beta);
  GibbsConditionReport rep;
  rep.truncated = se.truncated;
  rep.residual_a = trace_distance(reduce(psi, i), gi);
  const Region rest = i.complement();
  rep.residual_b = rest.empty() ? rep.residual_a : trace_distance(psi, product_extend(gi, reduce(psi, rest)));
  return rep;
}

HalvesProductReport araki_gibbs_halves_check(const Potential& phi, double beta, const Window& w, int cut) {
  return araki_gibbs_halves_check(diagonalize(phi, Region::whole(w)), phi, beta, cut);
}

HalvesProductReport araki_gibbs_halves_check(const HamiltonianSpectrum& h, const Potential& phi, double beta,
                                             int cut) {
  require_beta(beta);
  require_whole(h);
  const Window& w = h.region.window();
  const HalfChainCoupling coupling = half_chain_coupling(phi, cut, w);
  const DensityState psi = perturb(gibbs_state(h, beta), Matrix(beta * coupling.op.matrix()));
  const Region left = Region::interval(w.lo(), cut - 1, w);
  const Region right = Region::interval(cut, w.hi(), w);
  const DensityState target = product_extend(gibbs_state(phi, left, beta), gibbs_state(phi, right, beta));
  return {trace_distance(psi, target), coupling.norm};
}

DynamicsReport decoupled_dynamics_check(const Potential& phi, const Window& w, int cut,
                                        const std::vector<double>& times) {
  w.require_within_cap();
  const Region whole = Region::whole(w);
  const Region left = Region::interval(w.lo(), cut - 1, w);
  const Region right = Region::interval(cut, w.hi(), w);
  const HalfChainCoupling coupling = half_chain_coupling(phi, cut, w);
  const Matrix generator = inner_hamiltonian(phi, whole).matrix() - coupling.op.matrix();
  const Matrix hl = local_hamiltonian(phi, left);
  const Matrix hr = local_hamiltonian(phi, right);
  DynamicsReport rep;
  rep.generators_even = classify_parity(hl, w.statistics()) == Parity::Even &&
                        classify_parity(hr, w.statistics()) == Parity::Even;
  const RegionSplit split(whole, left);
  for (double t : times) {
    const Matrix u = linalg::unitary_evolution(generator, t);
    const Matrix v = split.to_frame(linalg::kron(linalg::unitary_evolution(hl, t), linalg::unitary_evolution(hr, t)));
    const double r = linalg::operator_norm(u - v);
    rep.residuals.emplace_back(t, r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

PerturbationReport perturbation_bound_check(const DensityState& omega, const Matrix& h) {
  const DensityState pert = perturb(omega, h);
  PerturbationReport rep;
  rep.shift = pert.expectation(h) - omega.expectation(h);
  rep.forward = relative_entropy(pert, omega).nats;
  rep.backward = relative_entropy(omega, pert).nats;
  rep.h_norm = linalg::spectral_norm_hermitian(h);
  rep.slack_forward = rep.shift - rep.forward;
  rep.slack_shift = 2.0 * rep.h_norm - rep.shift;
  rep.slack_backward = 2.0 * rep.h_norm - rep.backward;
  return rep;
}

CorrelationReport correlation_estimate_check(const Potential& phi, double beta, const Window& w, const Region& a,
                                             const LocalOperator& o_a, const LocalOperator& o_b) {
  require_beta(beta);
  const Region rest = a.complement();
  if (!a.contains(o_a.support()) || !rest.contains(o_b.support())) {
    throw PreconditionError("observables must be supported in A and in its complement");
  }
  if (linalg::operator_norm(o_a.matrix()) > 1.0 + 1e-12 || linalg::operator_norm(o_b.matrix()) > 1.0 + 1e-12) {
    throw PreconditionError("observables must have norm at most 1");
  }
  if (w.statistics() == Statistics::Fermion && (o_a.parity() != Parity::Even || o_b.parity() != Parity::Even)) {
    throw PreconditionError("fermionic correlation estimate takes even observables");
  }
  const DensityState g = gibbs_state(phi, Region::whole(w), beta);
  const SurfaceEnergy se = surface_energy(phi, a);
  const double hn = linalg::spectral_norm_hermitian(se.op.matrix());
  CorrelationReport rep;
  rep.covariance = std::abs(expect(g, (o_a * o_b).matrix()) - expect(g, o_a.matrix()) * expect(g, o_b.matrix()));
  rep.bound = 2.0 * std::sqrt(beta * hn);
  rep.slack = rep.bound - rep.covariance;
  rep.distance = trace_distance(product_extend(reduce(g, a), reduce(g, rest)), g);
  rep.pinsker_slack = 4.0 * beta * hn - rep.distance * rep.distance;
  return rep;
}

GroundStateReport ground_state_mutual_check(const Potential& phi, const Window& w, const Region& a) {
  return ground_state_mutual_check(diagonalize(phi, Region::whole(w)), a);
}

GroundStateReport ground_state_mutual_check(const HamiltonianSpectrum& h, const Region& a) {
  const Region& whole = require_whole(h);
  const GroundState gs = ground_state(h);
  GroundStateReport rep;
  rep.degeneracy = gs.degeneracy;
  rep.gap = gs.gap;
  if (gs.degeneracy > 1) {
    rep.skipped = true;
    rep.warning = "degenerate ground state (" + std::to_string(gs.degeneracy) + "-fold); pure-state identity not applicable";
    return rep;
  }
  rep.mutual = mutual_entropy(gs.state, a, a.complement()).nats;
  rep.entropy = von_neumann(gs.state, a).nats;
  rep.residual = std::abs(rep.mutual - 2.0 * rep.entropy);
  const Window& w = whole.window();
  for (int k = 1; k < w.size(); ++k) {
    rep.entropy_ladder.emplace_back(k, von_neumann(gs.state, Region::interval(w.lo(), w.lo() + k - 1, w)).nats);
  }
  return rep;
}

HalvesSeries halves_mutual_series(const Potential& phi, double beta, const std::vector<int>& halves,
                                  double tolerance) {
  require_beta(beta);
  HalvesSeries out;
  out.series.direction = ConvergenceSeries::Direction::NonDecreasing;
  out.series.tolerance = tolerance;
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (int k : halves) {
    const Window w(-k, k - 1, phi.statistics());
    w.require_within_cap();
    const double norm = half_chain_coupling(phi, 0, w).norm;
    out.bound = 2.0 * beta * norm;
    const Region left = Region::interval(-k, -1, w);
    const Region right = Region::interval(0, k - 1, w);
    const DensityState g = gibbs_state(phi, Region::whole(w), beta);
    const DonaldReport d = donald_decompose(g, gibbs_state(phi, left, beta), gibbs_state(phi, right, beta));
    out.points.push_back({k, d.mutual, d.relative, d.residual});
    out.series.points.emplace_back(2 * k, d.mutual);
    out.max_excess = std::max(out.max_excess, std::max(d.mutual, d.relative) - out.bound);
  }
  assess(out.series, 1e-9);
  return out;
}

}  // namespace arealaw
