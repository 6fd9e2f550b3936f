#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arealaw/verify.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace arealaw;

namespace {

// Oracle values for TFIM(J=1, g=1) unless noted, frozen.
constexpr double kCondFreeEnergy = -3.1921621952841797;  // 8 sites, beta 1, I = {3,4}
constexpr double kCovZ1Z6 = 0.10413786763990324;         // 8 sites, beta 1
constexpr double kArea10Mutual = 0.46724776824552849;    // 10 sites, beta 1, A = {3..6}
constexpr double kArea10EnergyGap = 1.1178085506831272;
// ground states on 10 sites: S of the prefixes of length 1..5, then the gap
constexpr double kGsG2[] = {0.082676774527436339, 0.087994254851507248, 0.088702206671459796,
                            0.088816411404889231, 0.088833115655212166};
constexpr double kGsG2Gap = 2.1333071927162166;
constexpr double kGsG1[] = {0.26485952038243571, 0.32877245124829058, 0.35930701512652297,
                            0.37441332616171885, 0.37905240541801116};
constexpr double kGsG1Gap = 0.29892037434571783;
// half-chain mutual entropy on 2k sites, beta 1, k = 2..5
constexpr double kHalvesTfim[] = {0.23631418446351171, 0.23733023320132807, 0.23738708877334291,
                                  0.23739026506681471};

const Potential kTfim = make_potential(Tfim{1.0, 1.0});

}  // namespace

TEST_CASE("conditional free energy of the Gibbs state") {
  const Window w = Window::of_size(8, Statistics::Spin);
  const auto g = gibbs_state(kTfim, Region::whole(w), 1.0);
  CHECK(conditional_free_energy(g, Region::interval(3, 4, w), kTfim, 1.0) ==
        doctest::Approx(kCondFreeEnergy).epsilon(1e-11));
}

TEST_CASE("local thermodynamic stability") {
  Rng rng = make_rng(21, 0);
  for (Statistics st : {Statistics::Spin, Statistics::Fermion}) {
    const Window w = Window::of_size(6, st);
    const Potential phi = st == Statistics::Spin ? kTfim : make_potential(Kitaev{1.0, 0.7, 0.4});
    const auto g = gibbs_state(phi, Region::whole(w), 1.0);
    const auto rep = lts_check(g, Region::interval(2, 3, w), phi, 1.0, 30, rng);
    REQUIRE(rep.trials.size() == 30);
    CHECK(std::abs(rep.trials[0].margin) < 1e-12);
    CHECK(rep.trials[1].margin > 0.0);
    CHECK(rep.min_margin >= -1e-9);
  }
}

TEST_CASE("area-law chain") {
  const Window w = Window::of_size(10, Statistics::Spin);
  const auto rep = area_law_chain(kTfim, 1.0, w, Region::interval(3, 6, w));
  CHECK(rep.mutual == doctest::Approx(kArea10Mutual).epsilon(1e-10));
  CHECK(rep.energy_gap_term == doctest::Approx(kArea10EnergyGap).epsilon(1e-10));
  CHECK(rep.norm_bound == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.geometric_bound == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rep.boundary_terms == 2);
  CHECK(rep.slack1 >= 0.0);
  CHECK(rep.slack2 >= 0.0);
  CHECK(rep.geometric_slack >= -1e-12);
  CHECK(rep.monotone_slack >= -1e-12);
  CHECK(rep.free_energy_slack >= -1e-12);
  CHECK(rep.route_gap <= 1e-9);
  CHECK(!rep.truncated);

  // low temperature keeps the marginals faithful
  const Window f = Window::of_size(8, Statistics::Fermion);
  const auto cold = area_law_chain(make_potential(Kitaev{1.0, 1.0, 0.5}), 5.0, f, Region::interval(0, 3, f));
  CHECK(std::isfinite(cold.route_gap));
  CHECK(cold.route_gap <= 1e-8);
  CHECK(cold.slack1 >= -1e-9);
}

TEST_CASE("correlation estimate") {
  const Window w = Window::of_size(8, Statistics::Spin);
  const auto rep = correlation_estimate_check(kTfim, 1.0, w, Region::interval(0, 3, w), site_operator(w, 1, Generator::Z),
                                              site_operator(w, 6, Generator::Z));
  CHECK(rep.covariance == doctest::Approx(kCovZ1Z6).epsilon(1e-10));
  CHECK(rep.bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.slack > 0.0);
  CHECK(rep.pinsker_slack >= 0.0);
}

TEST_CASE("Gibbs condition and halves product") {
  for (Statistics st : {Statistics::Spin, Statistics::Fermion}) {
    const Window w = Window::of_size(6, st);
    const Potential phi = st == Statistics::Spin ? kTfim : make_potential(Kitaev{1.0, 0.7, 0.4});
    const auto gc = gibbs_condition_check(phi, 0.8, w, Region::interval(2, 3, w));
    CHECK(gc.residual_a <= 1e-10);
    CHECK(gc.residual_b <= 1e-10);
    const auto hp = araki_gibbs_halves_check(phi, 0.8, w, 3);
    CHECK(hp.residual <= 1e-10);
    CHECK(hp.coupling_norm > 0.0);
  }
}

TEST_CASE("decoupled dynamics") {
  for (Statistics st : {Statistics::Spin, Statistics::Fermion}) {
    const Window w = Window::of_size(6, st);
    const Potential phi = st == Statistics::Spin ? kTfim : make_potential(Kitaev{1.0, 0.7, 0.4});
    const auto rep = decoupled_dynamics_check(phi, w, 3);
    CHECK(rep.residuals.size() == 3);
    CHECK(rep.max_residual <= 1e-10);
    CHECK(rep.generators_even);
  }
}

TEST_CASE("perturbation bounds") {
  Rng rng = make_rng(22, 0);
  const Window w = Window::of_size(4, Statistics::Spin);
  const auto g = gibbs_state(kTfim, Region::whole(w), 1.0);
  for (int k = 0; k < 10; ++k) {
    const Matrix h = random_hermitian(16, rng, 0.2 * (k + 1));
    const auto rep = perturbation_bound_check(g, h);
    CHECK(rep.h_norm == doctest::Approx(0.2 * (k + 1)).epsilon(1e-12));
    CHECK(rep.forward >= 0.0);
    CHECK(rep.slack_forward >= -1e-10);
    CHECK(rep.slack_shift >= -1e-10);
    CHECK(rep.slack_backward >= -1e-10);
  }
}

TEST_CASE("ground-state mutual entropy") {
  const Window w = Window::of_size(10, Statistics::Spin);
  const Region a = Region::interval(0, 4, w);
  for (double g : {2.0, 1.0}) {
    const auto rep = ground_state_mutual_check(make_potential(Tfim{1.0, g}), w, a);
    const double* expected = g == 2.0 ? kGsG2 : kGsG1;
    REQUIRE(!rep.skipped);
    CHECK(rep.degeneracy == 1);
    CHECK(rep.gap == doctest::Approx(g == 2.0 ? kGsG2Gap : kGsG1Gap).epsilon(1e-10));
    CHECK(rep.residual <= 1e-10);
    CHECK(rep.entropy == doctest::Approx(expected[4]).epsilon(1e-10));
    REQUIRE(rep.entropy_ladder.size() == 9);
    for (int k = 0; k < 5; ++k) CHECK(rep.entropy_ladder[k].second == doctest::Approx(expected[k]).epsilon(1e-10));
  }
  // no field: two-fold degenerate, skipped
  const auto rep = ground_state_mutual_check(make_potential(Tfim{1.0, 0.0}), Window::of_size(4, Statistics::Spin),
                                             Region::interval(0, 1, Window::of_size(4, Statistics::Spin)));
  CHECK(rep.skipped);
  CHECK(rep.degeneracy == 2);
}

TEST_CASE("half-chain mutual entropy series") {
  const auto s = halves_mutual_series(kTfim, 1.0, {2, 3, 4, 5});
  REQUIRE(s.points.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(s.points[k].half == k + 2);
    CHECK(s.points[k].mutual == doctest::Approx(kHalvesTfim[k]).epsilon(1e-10));
    CHECK(s.points[k].donald_residual <= 1e-10);
    CHECK(s.points[k].donald >= s.points[k].mutual - 1e-10);
  }
  CHECK(s.series.monotone);
  CHECK(s.bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.max_excess < 0.0);
  CHECK_THROWS_AS(halves_mutual_series(kTfim, 0.0, {2}), DomainError);
}
