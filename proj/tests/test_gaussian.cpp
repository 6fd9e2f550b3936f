#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arealaw/gaussian.hpp"
#include "oracle.hpp"

#include <cmath>
#include <limits>

using namespace arealaw;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Kitaev(t=1, delta=1, mu=0.5), 8 sites, beta 1: dense oracle values, frozen
constexpr double kKitaev8LeftHalf = 1.7629266654792994;
constexpr double kKitaev8MutualHalves = 0.32085731043881704;

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

// Many-body operator of a BdG Hamiltonian, assembled from oracle annihilators.
oracle::M many_body(const BdGHamiltonian& h) {
  const int n = h.sites();
  const auto d = Eigen::Index{1} << n;
  oracle::M out = h.constant * oracle::M::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const oracle::M ci = oracle::annihilator(n, i), cj = oracle::annihilator(n, j);
      out += h.hopping(i, j) * ci.adjoint() * cj;
      const oracle::M pair = h.pairing(i, j) * ci * cj;
      out += 0.5 * (pair + pair.adjoint());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("BdG form of the Kitaev chain") {
  const BdGHamiltonian h = bdg_from_potential(make_potential(Kitaev{1.0, 0.6, 0.4}), 5);
  CHECK(h.sites() == 5);
  CHECK(oracle::operator_norm(many_body(h) - oracle::kitaev(5, 1.0, 0.6, 0.4)) < 1e-12);
  CHECK(oracle::operator_norm(h.pairing + h.pairing.transpose()) < 1e-15);

  // Majorana form: H = (i/4) sum h_ab g_a g_b + constant
  const RealMatrix hm = h.majorana();
  CHECK((hm + hm.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  std::vector<oracle::M> g;
  for (int j = 0; j < 5; ++j) {
    const oracle::M c = oracle::annihilator(5, j);
    g.push_back(c + c.adjoint());
    g.push_back(oracle::cplx(0, 1) * (c.adjoint() - c));
  }
  oracle::M rebuilt = h.majorana_constant() * oracle::M::Identity(32, 32);
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) rebuilt += oracle::cplx(0, 0.25) * hm(a, b) * g[a] * g[b];
  CHECK(oracle::operator_norm(rebuilt - oracle::kitaev(5, 1.0, 0.6, 0.4)) < 1e-12);

  CHECK(h.nambu().rows() == 10);
  CHECK_THROWS_AS(bdg_from_potential(make_potential(Xxz{}), 4), UnsupportedError);
}

TEST_CASE("thermal Gaussian entropies match dense diagonalization") {
  const BdGHamiltonian h = bdg_from_potential(make_potential(Kitaev{1.0, 1.0, 0.5}), 8);
  const MajoranaCovariance m = thermal_covariance(h, 1.0);
  CHECK(!m.zero_modes);
  CHECK(gaussian_entropy(m, range(0, 3)).nats == doctest::Approx(kKitaev8LeftHalf).epsilon(1e-11));
  CHECK(gaussian_mutual(m, range(0, 3), range(4, 7)).nats == doctest::Approx(kKitaev8MutualHalves).epsilon(1e-10));

  // other temperatures and regions, against the oracle directly
  const oracle::M h8 = oracle::kitaev(8, 1.0, 1.0, 0.5);
  for (double beta : {0.3, 2.0}) {
    const MajoranaCovariance mb = thermal_covariance(h, beta);
    const oracle::M d = oracle::gibbs(h8, beta);
    CHECK(gaussian_entropy(mb, range(0, 7)).nats == doctest::Approx(oracle::entropy(d)).epsilon(1e-10));
    CHECK(gaussian_entropy(mb, range(0, 2)).nats ==
          doctest::Approx(oracle::reduced_entropy(d, 8, range(0, 2))).epsilon(1e-10));
    CHECK(gaussian_entropy(mb, range(5, 7)).nats ==
          doctest::Approx(oracle::reduced_entropy(d, 8, range(5, 7))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(thermal_covariance(h, 0.0), DomainError);
  CHECK_THROWS_AS(gaussian_entropy(m, {8}), PreconditionError);
  CHECK_THROWS_AS(gaussian_mutual(m, {0, 1}, {1, 2}), PreconditionError);
}

TEST_CASE("Gaussian ground states") {
  // trivial phase: unique ground state
  const BdGHamiltonian h = bdg_from_potential(make_potential(Kitaev{1.0, 1.0, 2.5}), 8);
  const MajoranaCovariance m = thermal_covariance(h, kInf);
  CHECK(!m.zero_modes);
  const oracle::M h8 = oracle::kitaev(8, 1.0, 1.0, 2.5);
  Eigen::SelfAdjointEigenSolver<oracle::M> es(h8);
  const Eigen::VectorXcd v = es.eigenvectors().col(0);
  const oracle::M d = v * v.adjoint();
  CHECK(gaussian_entropy(m, range(0, 3)).nats == doctest::Approx(oracle::reduced_entropy(d, 8, range(0, 3))).epsilon(1e-9));
  CHECK(std::abs(gaussian_entropy(m, range(0, 7)).nats) < 1e-10);

  // the ideal topological point has exact Majorana zero modes
  const MajoranaCovariance z = thermal_covariance(bdg_from_potential(make_potential(Kitaev{1.0, 1.0, 0.0}), 8), kInf);
  CHECK(z.zero_modes);
}

TEST_CASE("thermal destruction scan") {
  const auto scan = thermal_destruction_scan(Kitaev{1.0, 1.0, 2.0}, {2.0, kInf}, {32, 64, 128}, 1e-3);
  CHECK(scan.coupling_norm == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(scan.series.size() == 2);

  const auto& warm = scan.series[0];
  CHECK(warm.bound == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(warm.below_bound);
  CHECK(warm.saturated);
  CHECK(warm.label == "saturated");
  for (const auto& pt : warm.points) {
    CHECK(pt.mutual > 0.0);
    CHECK(pt.mutual < warm.bound);
  }

  const auto& cold = scan.series[1];
  CHECK(std::isinf(cold.bound));
  CHECK(cold.points.size() == 3);
  CHECK(!cold.label.empty());
}
