#include "arealaw/random.hpp"

#include "arealaw/detail/pauli.hpp"

#include <array>
#include <cmath>

namespace arealaw {

Rng make_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

Matrix random_unitary(Eigen::Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_ginibre(dim, dim, rng));
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_hermitian(Eigen::Index dim, Rng& rng, double norm) {
  Matrix g = random_ginibre(dim, dim, rng);
  Matrix h = (g + g.adjoint()) * 0.5;
  const double s = linalg::spectral_norm_hermitian(h);
  return s > 0.0 ? Matrix(h * (norm / s)) : h;
}

Matrix random_even_unitary(Eigen::Index dim, Rng& rng) {
  std::array<std::vector<Eigen::Index>, 2> sectors;
  for (Eigen::Index i = 0; i < dim; ++i) {
    sectors[static_cast<std::size_t>(detail::popcount_parity(static_cast<std::uint64_t>(i)))].push_back(i);
  }
  Matrix u = Matrix::Zero(dim, dim);
  for (const auto& idx : sectors) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    if (n == 0) continue;
    const Matrix block = random_unitary(n, rng);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) u(idx[a], idx[b]) = block(a, b);
  }
  return u;
}

Matrix even_part(const Matrix& m) { return (m + parity_conjugate(m)) * 0.5; }

DensityState random_state(const Region& region, Rng& rng, RandomStateOptions opt) {
  const auto d = static_cast<Eigen::Index>(region.dim());
  const Eigen::Index rank = opt.rank > 0 ? opt.rank : d;
  const Matrix g = random_ginibre(d, rank, rng);
  Matrix m = g * g.adjoint();
  if (opt.even && region.statistics() == Statistics::Fermion) m = even_part(m);
  m /= m.trace().real();
  if (opt.mix > 0.0) {
    m *= 1.0 - opt.mix;
    m.diagonal().array() += opt.mix / static_cast<double>(d);
  }
  return DensityState::from_matrix(std::move(m), region);
}

Channel random_channel(const Region& region, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(region.dim());
  const int m = static_cast<int>(region.size());
  const bool fermion = region.statistics() == Statistics::Fermion;
  const Matrix u = fermion ? random_even_unitary(d, rng) : random_unitary(d, rng);
  if (m == 0) return Channel(region, {u});

  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> site_dist(0, m - 1);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  const int kind = kind_dist(rng);
  const int k = site_dist(rng);
  const double p = p_dist(rng);

  auto string = [&](detail::PauliKey key, cplx c) { return detail::PauliSum::string(m, key, c).dense(); };
  const std::uint64_t bit = detail::position_bit(m, k);

  if (kind == 0) return Channel(region, {u});
  if (kind == 1) {
    const Matrix z = string({0, bit}, 1.0);
    return Channel(region, {std::sqrt(1.0 - p) * u, std::sqrt(p) * z * u});
  }
  // depolarizing mixture on one site
  std::vector<Matrix> kraus{std::sqrt(1.0 - 0.75 * p) * u};
  std::vector<Matrix> sigmas;
  if (fermion) {
    const auto g0 = detail::majorana(m, 2 * k);
    const auto g1 = detail::majorana(m, 2 * k + 1);
    const Matrix a = string(g0.key, g0.coeff);
    const Matrix b = string(g1.key, g1.coeff);
    sigmas = {a, b, cplx(0.0, 1.0) * a * b};
  } else {
    sigmas = {string({bit, 0}, 1.0), string({bit, bit}, cplx(0.0, 1.0)), string({0, bit}, 1.0)};
  }
  for (const auto& s : sigmas) kraus.push_back(std::sqrt(p / 4.0) * s * u);
  return Channel(region, std::move(kraus));
}

}  // namespace arealaw
