#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arealaw/entropy.hpp"
#include "arealaw/random.hpp"
#include "arealaw/states.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace arealaw;

namespace {

double norm(const Matrix& m) { return oracle::operator_norm(m); }
double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Potential field_only(double g) {
  return Potential(Statistics::Spin, {BaseTerm{{0}, {Monomial{-g, {{0, Generator::X}}}}}});
}

/// Majorana monomial prod_{a in mask} gamma_a on an n-mode chain, built from
/// the oracle annihilators; gamma_{2p} = c + c^+, gamma_{2p+1} = i (c^+ - c).
Matrix majorana_monomial(int n, const std::vector<int>& positions, std::uint32_t mask) {
  const auto d = Eigen::Index{1} << n;
  Matrix out = Matrix::Identity(d, d);
  for (std::size_t k = 0; k < 2 * positions.size(); ++k) {
    if (!((mask >> k) & 1)) continue;
    const Matrix c = oracle::annihilator(n, positions[k / 2]);
    out = out * (k % 2 == 0 ? Matrix(c + c.adjoint()) : Matrix(cplx(0, 1) * (c.adjoint() - c)));
  }
  return out;
}

}  // namespace

TEST_CASE("from_matrix validation") {
  const Window w = Window::of_size(1, Statistics::Spin);
  const Region r = Region::whole(w);
  Matrix m(2, 2);
  m << 0.5, 0.2, 0.1, 0.5;
  CHECK_THROWS_AS(DensityState::from_matrix(m, r), ContractError);
  m << 0.7, 0, 0, 0.7;
  CHECK_THROWS(DensityState::from_matrix(m, r));
  m << 1.2, 0, 0, -0.2;
  CHECK_THROWS_AS(DensityState::from_matrix(m, r), DomainError);
  m << 0.75, 0.25, 0.25, 0.25;
  const auto s = DensityState::from_matrix(m, r);
  CHECK(s.eigenvalues().sum() == doctest::Approx(1.0));
  CHECK(s.faithful());
}

TEST_CASE("Gibbs states") {
  SUBCASE("infinite-temperature limit") {
    const Window w = Window::of_size(4, Statistics::Spin);
    const auto g = gibbs_state(make_potential(Tfim{}), Region::whole(w), 1e-8);
    CHECK(max_abs(g.matrix() - Matrix::Identity(16, 16) / 16.0) <= 1e-6);
  }
  SUBCASE("single spin in a field") {
    const Window w = Window::of_size(1, Statistics::Spin);
    const auto g = gibbs_state(field_only(1.0), Region::whole(w), 1.0);
    const double z = std::exp(1.0) + std::exp(-1.0);
    CHECK(g.eigenvalues().maxCoeff() == doctest::Approx(std::exp(1.0) / z).epsilon(1e-14));
    CHECK(g.eigenvalues().minCoeff() == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-14));
    CHECK(g.expectation(oracle::pauli('X')) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
  }
  SUBCASE("TFIM energy on four sites") {
    constexpr double kEnergy = -4.0667362732297399;  // 16x16 eigensolve
    const Window w = Window::of_size(4, Statistics::Spin);
    const auto g = gibbs_state(make_potential(Tfim{1, 1}), Region::whole(w), 1.0);
    CHECK(g.expectation(oracle::tfim(4, 1, 1)) == doctest::Approx(kEnergy).epsilon(1e-12));
    const Matrix d = oracle::gibbs(oracle::tfim(4, 1, 1), 1.0);
    CHECK((d * oracle::tfim(4, 1, 1)).trace().real() == doctest::Approx(kEnergy).epsilon(1e-12));
    CHECK(norm(g.matrix() - d) < 1e-13);
    // the cached log is exact
    CHECK(norm(g.cached_log().value() - oracle::apply_fn(d, [](double x) { return std::log(x); })) < 1e-10);
  }
  CHECK_THROWS_AS(gibbs_state(make_potential(Tfim{}), Region::whole(Window::of_size(2, Statistics::Spin)), -1.0),
                  DomainError);
  CHECK_THROWS_AS(gibbs_state(make_potential(Tfim{}), Region::whole(Window::of_size(2, Statistics::Spin)),
                              std::numeric_limits<double>::infinity()),
                  DomainError);
}

TEST_CASE("ground states") {
  SUBCASE("dominant field gives the all-plus state") {
    const Window w = Window::of_size(4, Statistics::Spin);
    const auto gs = ground_state(make_potential(Tfim{1.0, 100.0}), Region::whole(w));
    Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(16, 0.25);
    CHECK(gs.degeneracy == 1);
    CHECK((plus.adjoint() * gs.state.matrix() * plus)(0, 0).real() >= 1 - 1e-3);
  }
  SUBCASE("low-temperature Gibbs state approaches the ground state") {
    const Window w = Window::of_size(6, Statistics::Spin);
    const Potential phi = make_potential(Tfim{1.0, 2.0});
    const auto h = diagonalize(phi, Region::whole(w));
    const auto gs = ground_state(h);
    const auto g = gibbs_state(h, 50.0);
    const auto s = relative_entropy(gs.state, g);
    CHECK(!s.infinite());
    CHECK(s.nats <= 1e-4);
    CHECK(gs.gap > 1.0);
  }
  SUBCASE("zero potential is fully degenerate") {
    const Window w = Window::of_size(3, Statistics::Spin);
    const auto gs = ground_state(field_only(0.0), Region::whole(w));
    CHECK(gs.degeneracy == 8);
    CHECK(max_abs(gs.state.matrix() - Matrix::Identity(8, 8) / 8.0) < 1e-15);
  }
}

TEST_CASE("spin reduction is the partial trace") {
  Rng rng = make_rng(1, 0);
  const Window w = Window::of_size(4, Statistics::Spin);
  const auto rho = random_state(Region::whole(w), rng);
  for (const std::vector<int>& keep : {std::vector<int>{0}, {1, 3}, {0, 2, 3}, {2}}) {
    const auto r = reduce(rho, Region(keep, w));
    CHECK(max_abs(r.matrix() - oracle::partial_trace(rho.matrix(), 4, keep)) < 1e-14);
  }
  // tracial and product inputs
  const auto tr = reduce(tracial_state(Region::whole(w)), Region({1, 2}, w));
  CHECK(max_abs(tr.matrix() - Matrix::Identity(4, 4) / 4.0) < 1e-15);
  const auto a = random_state(Region({0, 3}, w), rng);
  const auto b = random_state(Region({1, 2}, w), rng);
  const auto ab = product_extend(a, b);
  CHECK(max_abs(reduce(ab, a.support()).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(reduce(ab, b.support()).matrix() - b.matrix()) < 1e-14);
}

TEST_CASE("fermionic reduction matches all Majorana moments") {
  Rng rng = make_rng(2, 0);
  const Window w = Window::of_size(4, Statistics::Fermion);
  RandomStateOptions even;
  even.even = true;
  const auto rho = random_state(Region::whole(w), rng, even);
  REQUIRE(rho.parity_flag() == ParityFlag::Even);
  const std::vector<int> sites = {0, 2};
  const auto red = reduce(rho, Region(sites, w));
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    const cplx global = (rho.matrix() * majorana_monomial(4, sites, mask)).trace();
    const cplx local = (red.matrix() * majorana_monomial(2, {0, 1}, mask)).trace();
    CHECK(std::abs(global - local) < 1e-12);
  }
  // the expansion route agrees, for even and for non-even states
  const auto rho_odd = random_state(Region::whole(w), rng);
  REQUIRE(rho_odd.parity_flag() == ParityFlag::NonEven);
  for (const std::vector<int>& keep : {std::vector<int>{0, 2}, {1, 3}, {3}, {0, 1, 3}}) {
    const Region a(keep, w);
    CHECK(max_abs(reduce(rho, a).matrix() - reduce_by_expansion(rho, a).matrix()) < 1e-12);
    CHECK(max_abs(reduce(rho_odd, a).matrix() - reduce_by_expansion(rho_odd, a).matrix()) < 1e-12);
  }
}

TEST_CASE("product extension") {
  Rng rng = make_rng(3, 0);
  SUBCASE("tracial factors") {
    const Window w = Window::of_size(3, Statistics::Fermion);
    const auto p = product_extend(tracial_state(Region({1}, w)), tracial_state(Region({0, 2}, w)));
    CHECK(max_abs(p.matrix() - Matrix::Identity(8, 8) / 8.0) < 1e-15);
  }
  SUBCASE("spin factorization over Pauli strings") {
    const Window w = Window::of_size(4, Statistics::Spin);
    const Region a({0, 2}, w), b({1, 3}, w);
    const auto ra = random_state(a, rng), rb = random_state(b, rng);
    const auto p = product_extend(ra, rb);
    std::uniform_int_distribution<int> pick(0, 3);
    const char names[] = {'I', 'X', 'Y', 'Z'};
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const char a0 = names[pick(rng)], a1 = names[pick(rng)], b0 = names[pick(rng)], b1 = names[pick(rng)];
      const Matrix oa = oracle::kron(oracle::pauli(a0), oracle::pauli(a1));
      const Matrix ob = oracle::kron(oracle::pauli(b0), oracle::pauli(b1));
      const Matrix joint = oracle::at(4, 0, oracle::pauli(a0)) * oracle::at(4, 2, oracle::pauli(a1)) *
                           oracle::at(4, 1, oracle::pauli(b0)) * oracle::at(4, 3, oracle::pauli(b1));
      worst = std::max(worst, std::abs((p.matrix() * joint).trace() - (ra.matrix() * oa).trace() * (rb.matrix() * ob).trace()));
    }
    CHECK(worst <= 1e-12);
    CHECK(std::abs(mutual_entropy(p, a, b).nats) <= 1e-12);
  }
  SUBCASE("fermionic factorization over Majorana monomials") {
    const Window w = Window::of_size(4, Statistics::Fermion);
    const std::vector<int> sa = {0, 2}, sb = {1, 3};
    const Region a(sa, w), b(sb, w);
    RandomStateOptions even;
    even.even = true;
    const auto ra = random_state(a, rng, even), rb = random_state(b, rng, even);
    const auto p = product_extend(ra, rb);
    std::uniform_int_distribution<std::uint32_t> pick(0, 15);
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const std::uint32_t ma = pick(rng), mb = pick(rng);
      const Matrix joint = majorana_monomial(4, sa, ma) * majorana_monomial(4, sb, mb);
      const cplx lhs = (p.matrix() * joint).trace();
      const cplx rhs = (ra.matrix() * majorana_monomial(2, {0, 1}, ma)).trace() *
                       (rb.matrix() * majorana_monomial(2, {0, 1}, mb)).trace();
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-12);
    CHECK(std::abs(mutual_entropy(p, a, b).nats) <= 1e-12);
    const auto odd = random_state(a, rng);
    CHECK_THROWS_AS(product_extend(odd, rb), UnsupportedError);
  }
}

TEST_CASE("perturbed states") {
  const Window w = Window::of_size(4, Statistics::Spin);
  const Potential phi = make_potential(Tfim{1.0, 0.8});
  const double beta = 0.7;
  const auto g = gibbs_state(phi, Region::whole(w), beta);
  const Matrix v = oracle::at(4, 1, oracle::pauli('Z')) + 0.3 * oracle::at(4, 2, oracle::pauli('X'));
  const auto p = perturb(g, Matrix(beta * v));
  CHECK(max_abs(p.matrix() - oracle::gibbs(oracle::tfim(4, 1.0, 0.8) - v, beta)) < 1e-13);
  CHECK(max_abs(perturb(g, Matrix(Matrix::Zero(16, 16))).matrix() - g.matrix()) < 1e-14);
  CHECK(max_abs(perturb(g, Matrix(2.5 * Matrix::Identity(16, 16))).matrix() - g.matrix()) < 1e-14);

  const auto pure = pure_state(Eigen::VectorXcd::Unit(16, 3), Region::whole(w));
  CHECK_THROWS_AS(perturb(pure, v), DomainError);
  Matrix skew = v;
  skew(0, 1) += 0.5;
  CHECK_THROWS_AS(perturb(g, skew), ContractError);
}

TEST_CASE("LTS trial states") {
  const Window w = Window::of_size(4, Statistics::Spin);
  const auto g = gibbs_state(make_potential(Tfim{}), Region::whole(w), 1.0);
  const Region i = Region::interval(2, 3, w);
  CHECK(max_abs(lts_trial(g, Channel::identity(i)).matrix() - g.matrix()) < 1e-15);

  const auto dep = lts_trial(g, Channel::depolarizing(i));
  const Matrix expected = oracle::kron(oracle::partial_trace(g.matrix(), 4, {0, 1}), Matrix::Identity(4, 4) / 4.0);
  CHECK(max_abs(dep.matrix() - expected) < 1e-14);

  Rng rng = make_rng(4, 0);
  const Region mid = Region::interval(1, 2, w);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const auto psi = lts_trial(g, random_channel(mid, rng));
    worst = std::max(worst, max_abs(oracle::partial_trace(psi.matrix(), 4, {0, 3}) -
                                    oracle::partial_trace(g.matrix(), 4, {0, 3})));
  }
  CHECK(worst <= 1e-12);

  // fermionic trials keep the state even and the exterior fixed
  const Window f = Window::of_size(4, Statistics::Fermion);
  const auto gf = gibbs_state(make_potential(Kitaev{}), Region::whole(f), 1.0);
  for (int k = 0; k < 20; ++k) {
    const auto psi = lts_trial(gf, random_channel(Region::interval(1, 2, f), rng));
    CHECK(is_even(psi).even);
  }
  CHECK_THROWS_AS(Channel(i, {Matrix::Identity(4, 4) * 0.5}), ContractError);
}

TEST_CASE("evenness") {
  const Window f = Window::of_size(3, Statistics::Fermion);
  const auto g = gibbs_state(make_potential(Kitaev{1.0, 0.6, 0.3}), Region::whole(f), 1.0);
  CHECK(is_even(g).even);
  CHECK(g.parity_flag() == ParityFlag::Even);
  CHECK(is_even(tracial_state(Region::whole(f))).even);

  const Window one = Window::of_size(1, Statistics::Fermion);
  Eigen::VectorXcd psi(2);
  psi << 1.0, 1.0;
  const auto s = pure_state(psi, Region::whole(one));
  CHECK(!is_even(s).even);
  CHECK(is_even(s).residual > 0.5);
  CHECK(s.parity_flag() == ParityFlag::NonEven);
}
