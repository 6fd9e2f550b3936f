#include "arealaw/experiment.hpp"

#include "arealaw/gaussian.hpp"
#include "arealaw/random.hpp"
#include "arealaw/verify.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace arealaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kUnitsNats = "entropy_nats, beta_inverse_energy";
constexpr const char* kUnitsBits = "entropy_bits, beta_inverse_energy";

struct SuiteInfo {
  Suite suite;
  const char* name;
  double tolerance;
  bool per_window;   // one grid point per (model, window)
  bool dense;        // builds window-sized dense matrices
  bool finite_beta;  // consumes the beta grid and needs finite values
};

const std::vector<SuiteInfo>& suite_table() {
  static const std::vector<SuiteInfo> table = {
      {Suite::AreaLaw, "area_law", 1e-9, true, true, true},
      {Suite::Lts, "lts", 1e-9, true, true, true},
      {Suite::GibbsCondition, "gibbs_condition", 1e-9, true, true, true},
      {Suite::HalvesSeries, "halves_series", 1e-9, false, true, true},
      {Suite::Donald, "donald", 1e-8, false, false, false},
      {Suite::Pinsker, "pinsker", 1e-9, false, false, false},
      {Suite::Ssa, "ssa", 1e-10, false, false, false},
      {Suite::GroundState, "ground_state", 1e-9, true, true, false},
      {Suite::GaussianScan, "gaussian_scan", 1e-6, false, false, false},
      {Suite::Dynamics, "dynamics", 1e-9, true, true, false},
  };
  return table;
}

const SuiteInfo& info(Suite s) {
  for (const auto& i : suite_table())
    if (i.suite == s) return i;
  throw PreconditionError("unknown suite");
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ------------------------------------------------------------- config parsing

std::optional<double> real_of(const YAML::Node& n) {
  if (!n.IsScalar()) return std::nullopt;
  std::string s = n.Scalar();
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "+inf" || s == "infinity" || s == ".inf" || s == "+.inf") return kInf;
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    return std::nullopt;
  }
}

std::optional<long long> int_of(const YAML::Node& n) {
  if (!n.IsScalar()) return std::nullopt;
  try {
    return n.as<long long>();
  } catch (const YAML::Exception&) {
    return std::nullopt;
  }
}

std::vector<YAML::Node> as_list(const YAML::Node& n) {
  std::vector<YAML::Node> out;
  if (n.IsSequence()) {
    for (const auto& x : n) out.push_back(x);
  } else if (n.IsDefined() && !n.IsNull()) {
    out.push_back(n);
  }
  return out;
}

std::optional<ModelSpec> parse_model(const YAML::Node& n, std::vector<std::string>& errors) {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  if (n.IsScalar()) {
    name = n.Scalar();
  } else if (n.IsMap()) {
    if (!n["name"] || !n["name"].IsScalar()) {
      errors.push_back("model: missing 'name'");
      return std::nullopt;
    }
    name = n["name"].Scalar();
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (key != "name" && key != "params") errors.push_back("model: unknown key '" + key + "'");
    }
    if (const auto p = n["params"]) {
      if (!p.IsMap()) {
        errors.push_back("model " + name + ": 'params' must be a mapping");
      } else {
        for (const auto& kv : p) {
          const auto key = kv.first.as<std::string>();
          const auto v = real_of(kv.second);
          if (!v || !std::isfinite(*v)) {
            errors.push_back("model " + name + ": parameter '" + key + "' is not a finite number");
          } else {
            params.emplace_back(key, *v);
          }
        }
      }
    }
  } else {
    errors.push_back("model: expected a name or a mapping");
    return std::nullopt;
  }
  try {
    return make_model(name, params);
  } catch (const std::exception& e) {
    errors.push_back(std::string("model: ") + e.what());
    return std::nullopt;
  }
}

std::optional<RegionSpec> parse_region(const YAML::Node& n, std::vector<std::string>& errors) {
  RegionSpec r;
  if (n.IsSequence()) {
    r.kind = RegionSpec::Kind::Sites;
    for (const auto& x : n) {
      const auto v = int_of(x);
      if (!v) {
        errors.push_back("region: site lists must hold integers");
        return std::nullopt;
      }
      r.sites.push_back(static_cast<int>(*v));
    }
    std::sort(r.sites.begin(), r.sites.end());
    if (r.sites.empty() || std::adjacent_find(r.sites.begin(), r.sites.end()) != r.sites.end()) {
      errors.push_back("region: site list must be non-empty without repeats");
      return std::nullopt;
    }
    return r;
  }
  if (!n.IsScalar()) {
    errors.push_back("region: expected a pattern name or a site list");
    return std::nullopt;
  }
  const std::string s = n.Scalar();
  if (s == "half") return r;
  for (const auto& [prefix, kind] : {std::pair{std::string("central-"), RegionSpec::Kind::Central},
                                     std::pair{std::string("prefix-"), RegionSpec::Kind::Prefix}}) {
    if (s.rfind(prefix, 0) == 0) {
      r.kind = kind;
      try {
        std::size_t used = 0;
        r.k = std::stoi(s.substr(prefix.size()), &used);
        if (used + prefix.size() != s.size() || r.k < 1) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        errors.push_back("region: bad size in '" + s + "'");
        return std::nullopt;
      }
      return r;
    }
  }
  errors.push_back("region: unknown pattern '" + s + "' (half, central-k, prefix-k or a site list)");
  return std::nullopt;
}

template <class T>
std::vector<T> int_list(const YAML::Node& n, const char* key, std::vector<std::string>& errors) {
  std::vector<T> out;
  for (const auto& x : as_list(n)) {
    const auto v = int_of(x);
    if (!v) {
      errors.push_back(std::string(key) + ": expected integers");
      continue;
    }
    out.push_back(static_cast<T>(*v));
  }
  return out;
}

// ------------------------------------------------------------- grid points

struct GridPoint {
  Suite suite;
  ModelSpec model;
  int window = 0;
  std::size_t index = 0;
};

ResultRecord base(Suite s, const ModelSpec& m, std::optional<double> beta, int window, std::string region,
                  const ExperimentConfig& cfg) {
  ResultRecord r;
  r.suite = to_string(s);
  r.model = model_label(m);
  r.statistics = to_string(model_statistics(m));
  r.beta = beta;
  r.window = window;
  r.region = std::move(region);
  r.tolerance = cfg.tolerance(s);
  return r;
}

std::vector<double> finite_betas(const ExperimentConfig& cfg) {
  std::vector<double> out;
  for (double b : cfg.betas)
    if (std::isfinite(b)) out.push_back(b);
  return out;
}

std::string region_label(const RegionSpec& spec, const Region& a) { return spec.label() + ":" + to_string(a); }

/// Norm-one even observable at a site: Z for spins, 1 - 2n for fermions
/// (the same matrix under Jordan-Wigner).
LocalOperator site_observable(const Window& w, int site) {
  LocalOperator z = site_operator(w, site, Generator::Z);
  if (w.statistics() == Statistics::Spin) return z;
  Matrix m = Matrix::Identity(static_cast<Eigen::Index>(w.dim()), static_cast<Eigen::Index>(w.dim())) -
             2.0 * site_operator(w, site, Generator::N).matrix();
  return LocalOperator(std::move(m), Region({site}, w));
}

std::vector<ResultRecord> run_area_law(const GridPoint& p, const ExperimentConfig& cfg) {
  const Potential phi = make_potential(p.model);
  const Window w = Window::of_size(p.window, phi.statistics());
  const HamiltonianSpectrum h = diagonalize(phi, Region::whole(w));
  std::vector<ResultRecord> out;
  for (double beta : finite_betas(cfg)) {
    for (const auto& spec : cfg.regions) {
      const Region a = *spec.resolve(w);
      const AreaLawReport r = area_law_chain(h, phi, beta, a);
      // correlation pair across the boundary of A
      const Region rest = a.complement();
      const int sa = a.sites().back();
      int sb = rest.sites().front();
      for (int s : rest.sites())
        if (s > sa) {
          sb = s;
          break;
        }
      const CorrelationReport c =
          correlation_estimate_check(phi, beta, w, a, site_observable(w, sa), site_observable(w, sb));
      ResultRecord rec = base(p.suite, p.model, beta, p.window, region_label(spec, a), cfg);
      rec.quantities = {{"mutual", r.mutual, true},
                        {"mutual_relative", r.mutual_relative, true},
                        {"energy_gap_term", r.energy_gap_term, true},
                        {"norm_bound", r.norm_bound, true},
                        {"geometric_bound", r.geometric_bound, true},
                        {"mutual_sub", r.mutual_sub, true},
                        {"boundary_terms", static_cast<double>(r.boundary_terms)},
                        {"covariance", c.covariance},
                        {"covariance_bound", c.bound},
                        {"product_distance", c.distance}};
      rec.slacks = {{"chain_energy", r.slack1, true},
                    {"chain_norm", r.slack2, true},
                    {"geometric", r.geometric_slack, true},
                    {"monotone", r.monotone_slack, true},
                    {"route", -r.route_gap, true},
                    {"free_energy", r.free_energy_slack},
                    {"correlation", c.slack},
                    {"pinsker", c.pinsker_slack}};
      if (r.truncated) rec.flags.push_back("truncated");
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<ResultRecord> run_lts(const GridPoint& p, const ExperimentConfig& cfg, Rng& rng) {
  const Potential phi = make_potential(p.model);
  const Window w = Window::of_size(p.window, phi.statistics());
  const HamiltonianSpectrum h = diagonalize(phi, Region::whole(w));
  std::vector<ResultRecord> out;
  for (double beta : finite_betas(cfg)) {
    const DensityState g = gibbs_state(h, beta);
    for (const auto& spec : cfg.regions) {
      const Region a = *spec.resolve(w);
      const LTSReport r = lts_check(g, a, phi, beta, cfg.trials, rng);
      ResultRecord rec = base(p.suite, p.model, beta, p.window, region_label(spec, a), cfg);
      rec.quantities = {{"free_energy", r.free_energy}, {"trials", static_cast<double>(r.trials.size())}};
      rec.slacks = {{"min_margin", r.min_margin}};
      rec.flags.push_back("truncated");  // W \ I stands in for the exterior
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<ResultRecord> run_gibbs_condition(const GridPoint& p, const ExperimentConfig& cfg) {
  const Potential phi = make_potential(p.model);
  const Window w = Window::of_size(p.window, phi.statistics());
  const HamiltonianSpectrum h = diagonalize(phi, Region::whole(w));
  const int cut = p.window / 2;
  std::vector<ResultRecord> out;
  for (double beta : finite_betas(cfg)) {
    for (const auto& spec : cfg.regions) {
      const Region a = *spec.resolve(w);
      const GibbsConditionReport r = gibbs_condition_check(h, phi, beta, a);
      ResultRecord rec = base(p.suite, p.model, beta, p.window, region_label(spec, a), cfg);
      rec.quantities = {{"residual_local", r.residual_a}, {"residual_product", r.residual_b}};
      rec.slacks = {{"local", -r.residual_a}, {"product", -r.residual_b}};
      if (r.truncated) rec.flags.push_back("truncated");
      out.push_back(std::move(rec));
    }
    const HalvesProductReport hp = araki_gibbs_halves_check(h, phi, beta, cut);
    ResultRecord rec = base(p.suite, p.model, beta, p.window, "cut@" + std::to_string(cut), cfg);
    rec.quantities = {{"residual_halves", hp.residual}, {"coupling_norm", hp.coupling_norm}};
    rec.slacks = {{"halves", -hp.residual}};
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ResultRecord> run_ground_state(const GridPoint& p, const ExperimentConfig& cfg) {
  const Potential phi = make_potential(p.model);
  const Window w = Window::of_size(p.window, phi.statistics());
  const HamiltonianSpectrum h = diagonalize(phi, Region::whole(w));
  std::vector<ResultRecord> out;
  for (const auto& spec : cfg.regions) {
    const Region a = *spec.resolve(w);
    const GroundStateReport r = ground_state_mutual_check(h, a);
    ResultRecord rec = base(p.suite, p.model, kInf, p.window, region_label(spec, a), cfg);
    rec.quantities = {{"degeneracy", static_cast<double>(r.degeneracy)}, {"gap", r.gap}};
    if (r.skipped) {
      rec.flags.push_back("skipped: " + r.warning);
    } else {
      rec.quantities.push_back({"mutual", r.mutual, true});
      rec.quantities.push_back({"entropy", r.entropy, true});
      rec.slacks = {{"pure_identity", -r.residual, true}};
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ResultRecord> run_dynamics(const GridPoint& p, const ExperimentConfig& cfg) {
  const Potential phi = make_potential(p.model);
  const Window w = Window::of_size(p.window, phi.statistics());
  const int cut = p.window / 2;
  const DynamicsReport r = decoupled_dynamics_check(phi, w, cut);
  ResultRecord rec = base(p.suite, p.model, std::nullopt, p.window, "cut@" + std::to_string(cut), cfg);
  for (const auto& [t, res] : r.residuals) rec.quantities.push_back({"residual_t=" + fmt17(t), res});
  rec.slacks = {{"factorization", -r.max_residual}};
  if (!r.generators_even) rec.flags.push_back("odd_generators");
  return {rec};
}

std::vector<ResultRecord> run_halves(const GridPoint& p, const ExperimentConfig& cfg) {
  const Potential phi = make_potential(p.model);
  const int largest = *std::max_element(cfg.halves.begin(), cfg.halves.end());
  std::vector<ResultRecord> out;
  for (double beta : finite_betas(cfg)) {
    const HalvesSeries s = halves_mutual_series(phi, beta, cfg.halves);
    ResultRecord rec = base(p.suite, p.model, beta, 2 * largest, "halves", cfg);
    double step = kInf;
    double donald = 0.0;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const auto& pt = s.points[k];
      rec.quantities.push_back({"mutual_k=" + std::to_string(pt.half), pt.mutual, true});
      donald = std::max(donald, pt.donald_residual);
      if (k > 0) step = std::min(step, pt.mutual - s.points[k - 1].mutual);
    }
    rec.quantities.push_back({"bound", s.bound, true});
    rec.slacks.push_back({"bound", -s.max_excess, true});
    if (std::isfinite(step)) rec.slacks.push_back({"monotone", step, true});
    rec.slacks.push_back({"donald", -donald, true});
    if (!s.series.converged) rec.flags.push_back("unconverged");
    out.push_back(std::move(rec));
  }
  return out;
}

RandomStateOptions faithful_options(Statistics st) {
  RandomStateOptions o;
  o.mix = 0.1;
  o.even = st == Statistics::Fermion;
  return o;
}

std::vector<ResultRecord> run_donald(const GridPoint& p, const ExperimentConfig& cfg, Rng& rng) {
  const Statistics st = model_statistics(p.model);
  double worst = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const int n = 2 + i % 5;
    const Window w = Window::of_size(n, st);
    const Region l = Region::interval(0, n / 2 - 1, w);
    const Region r = l.complement();
    const auto opt = faithful_options(st);
    const DensityState omega = random_state(Region::whole(w), rng, opt);
    const DensityState rho_l = random_state(l, rng, opt);
    const DensityState rho_r = random_state(r, rng, opt);
    worst = std::max(worst, donald_decompose(omega, rho_l, rho_r).residual);
  }
  ResultRecord rec = base(p.suite, p.model, std::nullopt, 6, "halves", cfg);
  rec.quantities = {{"samples", static_cast<double>(cfg.samples)}, {"max_residual", worst, true}};
  rec.slacks = {{"decomposition", -worst, true}};
  return {rec};
}

std::vector<ResultRecord> run_pinsker(const GridPoint& p, const ExperimentConfig& cfg, Rng& rng) {
  const Statistics st = model_statistics(p.model);
  double pinsker = kInf, forward = kInf, shift = kInf, backward = kInf;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < cfg.samples; ++i) {
    const int n = 1 + i % 4;
    const Window w = Window::of_size(n, st);
    const Region all = Region::whole(w);
    RandomStateOptions opt;
    opt.even = st == Statistics::Fermion;
    const DensityState rho = random_state(all, rng, opt);
    opt.mix = 0.05;
    const DensityState sigma = random_state(all, rng, opt);
    pinsker = std::min(pinsker, pinsker_gap(rho, sigma));

    const DensityState omega = random_state(all, rng, faithful_options(st));
    const double norm = 2.0 * (1.0 - unit(rng));  // (0, 2]
    Matrix h = random_hermitian(static_cast<Eigen::Index>(all.dim()), rng, 1.0);
    if (st == Statistics::Fermion) h = even_part(h);
    h *= norm / std::max(linalg::operator_norm(h), 1e-300);
    const PerturbationReport r = perturbation_bound_check(omega, h);
    forward = std::min(forward, r.slack_forward);
    shift = std::min(shift, r.slack_shift);
    backward = std::min(backward, r.slack_backward);
  }
  ResultRecord rec = base(p.suite, p.model, std::nullopt, 4, "all", cfg);
  rec.quantities = {{"samples", static_cast<double>(cfg.samples)}};
  rec.slacks = {{"pinsker", pinsker, true},
                {"perturbed_forward", forward, true},
                {"perturbed_shift", shift, true},
                {"perturbed_backward", backward, true}};
  return {rec};
}

std::vector<ResultRecord> run_ssa(const GridPoint& p, const ExperimentConfig& cfg, Rng& rng) {
  const Statistics st = model_statistics(p.model);
  RandomStateOptions opt;
  opt.even = st == Statistics::Fermion;
  double ssa = kInf, chain = kInf, triangle = kInf, twice = kInf, monotone = kInf;
  int skipped = 0;
  for (int i = 0; i < cfg.samples; ++i) {
    const Window w3 = Window::of_size(3, st);
    const DensityState rho = random_state(Region::whole(w3), rng, opt);
    ssa = std::min(ssa, ssa_gap(rho, Region::interval(0, 1, w3), Region::interval(1, 2, w3)));

    const Window w4 = Window::of_size(4, st);
    const DensityState sigma = random_state(Region::whole(w4), rng, opt);
    const EntropyBoundsReport b = entropy_bounds_check(sigma, Region({1}, w4), Region({2, 3}, w4));
    if (b.skipped) {
      ++skipped;
      continue;
    }
    for (double c : b.chain_slacks) chain = std::min(chain, c);
    triangle = std::min(triangle, b.triangle_slack);
    twice = std::min(twice, b.twice_slack);
    monotone = std::min(monotone, b.monotone_slack);
  }
  ResultRecord rec = base(p.suite, p.model, std::nullopt, 4, "all", cfg);
  rec.quantities = {{"samples", static_cast<double>(cfg.samples)}};
  rec.slacks = {{"ssa", ssa, true}};
  if (std::isfinite(chain)) {
    rec.slacks.push_back({"conditional_chain", chain, true});
    rec.slacks.push_back({"triangle", triangle, true});
    rec.slacks.push_back({"twice_entropy", twice, true});
    rec.slacks.push_back({"mutual_monotone", monotone, true});
  }
  if (skipped) rec.flags.push_back("skipped: " + std::to_string(skipped) + " non-even states");
  return {rec};
}

std::vector<ResultRecord> run_gaussian_scan(const GridPoint& p, const ExperimentConfig& cfg) {
  const ThermalDestructionScan scan = thermal_destruction_scan(p.model, cfg.betas, cfg.ladder);
  const int largest = *std::max_element(cfg.ladder.begin(), cfg.ladder.end());
  std::vector<ResultRecord> out;
  for (const auto& s : scan.series) {
    ResultRecord rec = base(p.suite, p.model, s.beta, largest, "half", cfg);
    double top = 0.0, step = kInf;
    bool zero_modes = false, shifted = false;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const auto& pt = s.points[k];
      rec.quantities.push_back({"mutual_L=" + std::to_string(pt.sites), pt.mutual, true});
      top = std::max(top, pt.mutual);
      if (k > 0) step = std::min(step, pt.mutual - s.points[k - 1].mutual);
      zero_modes = zero_modes || pt.zero_modes;
      shifted = shifted || pt.mu_shifted;
    }
    rec.quantities.push_back({"coupling_norm", scan.coupling_norm});
    rec.quantities.push_back({"bound", s.bound, true});
    if (s.saturated_at) rec.quantities.push_back({"saturated_at", static_cast<double>(*s.saturated_at)});
    if (std::isfinite(s.beta)) {
      rec.slacks.push_back({"bound", s.bound - top, true});
      if (!s.saturated) rec.flags.push_back("unconverged");
    } else {
      if (std::isfinite(step)) rec.slacks.push_back({"growth", step, true});
      rec.flags.push_back("surrogate: " + s.label);
      if (s.saturated) rec.flags.push_back("saturated");
    }
    if (zero_modes) rec.flags.push_back("zero_modes");
    if (shifted) rec.flags.push_back("mu_shifted");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ResultRecord> execute(const GridPoint& p, const ExperimentConfig& cfg) {
  Rng rng = make_rng(cfg.seed, p.index);
  try {
    switch (p.suite) {
      case Suite::AreaLaw: return run_area_law(p, cfg);
      case Suite::Lts: return run_lts(p, cfg, rng);
      case Suite::GibbsCondition: return run_gibbs_condition(p, cfg);
      case Suite::HalvesSeries: return run_halves(p, cfg);
      case Suite::Donald: return run_donald(p, cfg, rng);
      case Suite::Pinsker: return run_pinsker(p, cfg, rng);
      case Suite::Ssa: return run_ssa(p, cfg, rng);
      case Suite::GroundState: return run_ground_state(p, cfg);
      case Suite::GaussianScan: return run_gaussian_scan(p, cfg);
      case Suite::Dynamics: return run_dynamics(p, cfg);
    }
  } catch (const std::exception& e) {
    ResultRecord rec = base(p.suite, p.model, std::nullopt, p.window, "", cfg);
    rec.flags.push_back(std::string("error: ") + e.what());
    return {rec};
  }
  return {};
}

// ------------------------------------------------------------- emission

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double scale(const Entry& e, const EmitOptions& opt) { return e.entropy && opt.bits ? e.value / std::log(2.0) : e.value; }

std::string join_entries(const std::vector<Entry>& entries, const EmitOptions& opt) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += ';';
    out += e.name + "=" + fmt17(scale(e, opt));
  }
  return out;
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return fmt17(x);
}

double number_of(const nlohmann::ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw std::invalid_argument("not a number: " + s);
}

nlohmann::ordered_json entries_json(const std::vector<Entry>& entries, const EmitOptions& opt) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    arr.push_back({{"name", e.name}, {"value", number(scale(e, opt))}, {"unit", e.entropy ? (opt.bits ? "bits" : "nats") : ""}});
  }
  return arr;
}

std::vector<Entry> entries_from(const nlohmann::ordered_json& arr) {
  std::vector<Entry> out;
  for (const auto& j : arr) {
    Entry e{j.at("name").get<std::string>(), number_of(j.at("value")), false};
    const auto unit = j.at("unit").get<std::string>();
    e.entropy = !unit.empty();
    if (unit == "bits") e.value *= std::log(2.0);
    out.push_back(e);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------- public

std::string to_string(Suite s) { return info(s).name; }

std::optional<Suite> parse_suite(const std::string& name) {
  for (const auto& i : suite_table())
    if (name == i.name) return i.suite;
  return std::nullopt;
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> all = [] {
    std::vector<Suite> v;
    for (const auto& i : suite_table()) v.push_back(i.suite);
    return v;
  }();
  return all;
}

std::string RegionSpec::label() const {
  switch (kind) {
    case Kind::Half: return "half";
    case Kind::Central: return "central-" + std::to_string(k);
    case Kind::Prefix: return "prefix-" + std::to_string(k);
    case Kind::Sites: break;
  }
  return "sites";
}

std::optional<Region> RegionSpec::resolve(const Window& w) const {
  const int n = w.size();
  std::vector<int> s;
  switch (kind) {
    case Kind::Half:
      for (int i = 0; i < n / 2; ++i) s.push_back(w.lo() + i);
      break;
    case Kind::Central:
    case Kind::Prefix: {
      if (k >= n) return std::nullopt;
      const int start = kind == Kind::Central ? (n - k) / 2 : 0;
      for (int i = 0; i < k; ++i) s.push_back(w.lo() + start + i);
      break;
    }
    case Kind::Sites:
      for (int p : sites) {
        if (p < 0 || p >= n) return std::nullopt;
        s.push_back(w.lo() + p);
      }
      break;
  }
  if (s.empty() || static_cast<int>(s.size()) >= n) return std::nullopt;
  return Region(std::move(s), w);
}

double ExperimentConfig::tolerance(Suite s) const {
  const auto it = tolerances.find(s);
  return it != tolerances.end() ? it->second : info(s).tolerance;
}

namespace {
std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  - " + e;
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs) : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  if (!root.IsMap()) throw ConfigError({"top level must be a mapping"});

  std::vector<std::string> errors;
  ExperimentConfig cfg;
  static const std::set<std::string> known = {"model", "models", "statistics", "beta", "windows", "regions",
                                              "suites", "tolerances", "seed", "trials", "samples", "halves",
                                              "ladder", "window_ladder"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) errors.push_back("unknown key '" + key + "'");
  }

  if (root["model"] && root["models"]) errors.push_back("give either 'model' or 'models', not both");
  for (const auto& n : as_list(root["models"] ? root["models"] : root["model"])) {
    if (auto m = parse_model(n, errors)) cfg.models.push_back(*m);
  }
  if (cfg.models.empty() && !root["model"] && !root["models"]) errors.push_back("missing 'model'");

  if (const auto st = root["statistics"]) {
    const std::string s = st.IsScalar() ? st.Scalar() : "";
    if (s != "spin" && s != "fermion") {
      errors.push_back("statistics must be 'spin' or 'fermion'");
    } else {
      for (const auto& m : cfg.models)
        if (to_string(model_statistics(m)) != s)
          errors.push_back("statistics '" + s + "' does not match model " + model_label(m));
    }
  }

  for (const auto& n : as_list(root["beta"])) {
    const auto v = real_of(n);
    if (!v) {
      errors.push_back("beta: '" + (n.IsScalar() ? n.Scalar() : std::string("?")) + "' is not a number");
      continue;
    }
    cfg.betas.push_back(*v);
  }
  if (root["windows"] && root["window_ladder"]) errors.push_back("give either 'windows' or 'window_ladder', not both");
  cfg.windows = int_list<int>(root["windows"] ? root["windows"] : root["window_ladder"], "windows", errors);

  for (const auto& n : as_list(root["regions"])) {
    if (auto r = parse_region(n, errors)) cfg.regions.push_back(*r);
  }
  if (cfg.regions.empty() && !root["regions"]) cfg.regions.push_back(RegionSpec{});

  if (!root["suites"]) {
    // default: every suite the models support
    for (Suite s : all_suites()) {
      if (s == Suite::GaussianScan &&
          !std::all_of(cfg.models.begin(), cfg.models.end(), [](const ModelSpec& m) {
            return model_statistics(m) == Statistics::Fermion && make_potential(m).is_quadratic();
          }))
        continue;
      cfg.suites.push_back(s);
    }
  }
  for (const auto& n : as_list(root["suites"])) {
    const std::string s = n.IsScalar() ? n.Scalar() : "";
    if (auto suite = parse_suite(s)) {
      if (std::find(cfg.suites.begin(), cfg.suites.end(), *suite) == cfg.suites.end()) cfg.suites.push_back(*suite);
    } else {
      errors.push_back("unknown suite '" + s + "'");
    }
  }

  if (const auto t = root["tolerances"]) {
    if (!t.IsMap()) {
      errors.push_back("tolerances must map suite names to numbers");
    } else {
      for (const auto& kv : t) {
        const auto key = kv.first.as<std::string>();
        const auto suite = parse_suite(key);
        const auto v = real_of(kv.second);
        if (!suite) errors.push_back("tolerances: unknown suite '" + key + "'");
        else if (!v || !(*v >= 0.0) || !std::isfinite(*v)) errors.push_back("tolerances: '" + key + "' must be a finite number >= 0");
        else cfg.tolerances[*suite] = *v;
      }
    }
  }

  if (const auto s = root["seed"]) {
    try {
      cfg.seed = s.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      errors.push_back("seed must be a non-negative integer");
    }
  }
  for (auto [key, target] : {std::pair{"trials", &cfg.trials}, std::pair{"samples", &cfg.samples}}) {
    if (const auto n = root[key]) {
      const auto v = int_of(n);
      if (!v) errors.push_back(std::string(key) + " must be an integer");
      else *target = static_cast<int>(*v);
    }
  }
  if (root["halves"]) cfg.halves = int_list<int>(root["halves"], "halves", errors);
  if (root["ladder"]) cfg.ladder = int_list<int>(root["ladder"], "ladder", errors);

  const bool model_failed = cfg.models.empty();
  for (auto& e : validation_errors(cfg)) {
    if (model_failed && e == "no model given") continue;  // already reported
    errors.push_back(std::move(e));
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> validation_errors(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.models.empty()) errors.push_back("no model given");
  bool uses_beta = false, uses_windows = false, dense = false;
  std::vector<std::string> finite_only;
  for (Suite s : cfg.suites) {
    const auto& i = info(s);
    uses_beta = uses_beta || i.finite_beta || s == Suite::GaussianScan;
    uses_windows = uses_windows || i.per_window;
    dense = dense || (i.per_window && i.dense);
    if (i.finite_beta) finite_only.push_back(i.name);
  }
  for (double b : cfg.betas) {
    if (std::isnan(b) || b <= 0.0) errors.push_back("beta must be positive, got " + fmt17(b));
  }
  const bool has_inf = std::any_of(cfg.betas.begin(), cfg.betas.end(), [](double b) { return std::isinf(b) && b > 0; });
  if (has_inf && !finite_only.empty()) {
    std::string names;
    for (const auto& n : finite_only) names += (names.empty() ? "" : ", ") + n;
    errors.push_back("beta = inf is only meaningful for ground_state and gaussian_scan; drop it or the suites " + names);
  }
  if (uses_beta && cfg.betas.empty()) errors.push_back("the selected suites need a non-empty 'beta' list");
  if (uses_windows && cfg.windows.empty()) errors.push_back("the selected suites need a non-empty 'windows' list");
  for (int n : cfg.windows) {
    if (n < 2) errors.push_back("window " + std::to_string(n) + " is too small (need at least 2 sites)");
    else if (dense && n > kEdWindowCap)
      errors.push_back("window " + std::to_string(n) + " exceeds the dense cap of " + std::to_string(kEdWindowCap) +
                       " sites (dimension 2^" + std::to_string(n) + ")");
  }
  if (uses_windows) {
    if (cfg.regions.empty()) errors.push_back("no regions given");
    for (const auto& r : cfg.regions) {
      for (int n : cfg.windows) {
        if (n < 2 || n > kEdWindowCap) continue;
        if (!r.resolve(Window::of_size(n, Statistics::Spin)))
          errors.push_back("region " + r.label() + " does not fit a window of " + std::to_string(n) +
                           " sites with a non-empty complement");
      }
    }
  }
  const auto selected = [&](Suite s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
  if (selected(Suite::Lts) && cfg.trials < 2) errors.push_back("trials must be at least 2");
  if ((selected(Suite::Donald) || selected(Suite::Pinsker) || selected(Suite::Ssa)) && cfg.samples < 1)
    errors.push_back("samples must be positive");
  if (selected(Suite::HalvesSeries)) {
    if (cfg.halves.empty()) errors.push_back("halves must be non-empty");
    for (int k : cfg.halves)
      if (k < 1 || 2 * k > kEdWindowCap)
        errors.push_back("halves: k = " + std::to_string(k) + " outside 1.." + std::to_string(kEdWindowCap / 2));
    if (!std::is_sorted(cfg.halves.begin(), cfg.halves.end())) errors.push_back("halves must be increasing");
  }
  if (selected(Suite::GaussianScan)) {
    if (cfg.ladder.empty()) errors.push_back("ladder must be non-empty");
    for (int l : cfg.ladder)
      if (l < 4 || l > kGaussianSitesCap)
        errors.push_back("ladder: length " + std::to_string(l) + " outside 4.." + std::to_string(kGaussianSitesCap));
    if (!std::is_sorted(cfg.ladder.begin(), cfg.ladder.end())) errors.push_back("ladder must be increasing");
    for (const auto& m : cfg.models)
      if (!make_potential(m).is_quadratic() || model_statistics(m) != Statistics::Fermion)
        errors.push_back("gaussian_scan needs a quadratic fermionic model, got " + model_label(m));
  }
  return errors;
}

void validate(const ExperimentConfig& cfg) {
  auto errors = validation_errors(cfg);
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

bool is_hard_flag(const std::string& flag) {
  return flag.rfind("error", 0) == 0 || flag.rfind("support_violation", 0) == 0;
}

void ResultRecord::finalize() {
  pass = std::none_of(flags.begin(), flags.end(), is_hard_flag);
  for (const auto& s : slacks)
    if (!(s.value >= -tolerance)) pass = false;
  if (slacks.empty() && flags.empty()) pass = false;  // nothing was checked
}

std::vector<ResultRecord> run(const ExperimentConfig& cfg, RunOptions options) {
  validate(cfg);
  std::vector<GridPoint> points;
  for (Suite s : cfg.suites) {
    for (const auto& m : cfg.models) {
      if (info(s).per_window) {
        for (int n : cfg.windows) points.push_back({s, m, n, points.size()});
      } else {
        points.push_back({s, m, 0, points.size()});
      }
    }
  }

  std::vector<std::vector<ResultRecord>> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) results[i] = execute(points[i], cfg);
  };
  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(points.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<ResultRecord> out;
  for (auto& r : results)
    for (auto& rec : r) {
      rec.finalize();
      out.push_back(std::move(rec));
    }
  std::stable_sort(out.begin(), out.end(), [](const ResultRecord& a, const ResultRecord& b) {
    const double ba = a.beta.value_or(-1.0), bb = b.beta.value_or(-1.0);
    return std::tie(a.suite, a.model, ba, a.window) < std::tie(b.suite, b.model, bb, b.window);
  });
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records, std::ostream& out, EmitOptions opt) {
  out << "# units: " << (opt.bits ? kUnitsBits : kUnitsNats) << '\n';
  out << "suite,model,statistics,beta,window,region,pass,flags,quantities,slacks\n";
  for (const auto& r : records) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << csv_field(r.suite) << ',' << csv_field(r.model) << ',' << r.statistics << ','
        << (r.beta ? fmt17(*r.beta) : "") << ',' << r.window << ',' << csv_field(r.region) << ','
        << (r.pass ? "true" : "false") << ',' << csv_field(flags) << ',' << csv_field(join_entries(r.quantities, opt))
        << ',' << csv_field(join_entries(r.slacks, opt)) << '\n';
  }
}

void emit_json(const std::vector<ResultRecord>& records, std::ostream& out, EmitOptions opt) {
  nlohmann::ordered_json doc;
  doc["units"] = opt.bits ? kUnitsBits : kUnitsNats;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["model"] = r.model;
    j["statistics"] = r.statistics;
    j["beta"] = r.beta ? number(*r.beta) : nlohmann::ordered_json(nullptr);
    j["window"] = r.window;
    j["region"] = r.region;
    j["pass"] = r.pass;
    j["flags"] = r.flags;
    j["quantities"] = entries_json(r.quantities, opt);
    j["slacks"] = entries_json(r.slacks, opt);
    j["tolerance"] = r.tolerance;
    arr.push_back(std::move(j));
  }
  doc["records"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void emit(const std::vector<ResultRecord>& records, Format format, const std::filesystem::path& path,
          EmitOptions opt) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == Format::Csv) emit_csv(records, out, opt);
  else emit_json(records, out, opt);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<ResultRecord> records_from_json(const std::string& text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<ResultRecord> out;
  for (const auto& j : doc.at("records")) {
    ResultRecord r;
    r.suite = j.at("suite").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.statistics = j.at("statistics").get<std::string>();
    if (!j.at("beta").is_null()) r.beta = number_of(j.at("beta"));
    r.window = j.at("window").get<int>();
    r.region = j.at("region").get<std::string>();
    r.pass = j.at("pass").get<bool>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    r.quantities = entries_from(j.at("quantities"));
    r.slacks = entries_from(j.at("slacks"));
    r.tolerance = j.at("tolerance").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

int exit_code(const std::vector<ResultRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const ResultRecord& r) { return r.pass; }) ? 0 : 1;
}

}  // namespace arealaw
