#include "arealaw/lattice.hpp"

#include "arealaw/detail/materialize.hpp"
#include "arealaw/detail/pauli.hpp"
#include "arealaw/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace arealaw {

// ---------------------------------------------------------------- Window

Window::Window(int lo, int hi, Statistics statistics) : lo_(lo), hi_(hi), statistics_(statistics) {
  if (lo > hi) throw PreconditionError("window requires lo <= hi");
  if (hi - lo + 1 > 62) throw ResourceError("window wider than 62 sites cannot be indexed");
}

Window Window::of_size(int n, Statistics statistics) { return Window(0, n - 1, statistics); }

void Window::require_within_cap(int cap) const {
  if (size() > cap) {
    throw ResourceError("window of " + std::to_string(size()) + " sites exceeds the dense cap of " +
                        std::to_string(cap) + " sites");
  }
}

// ---------------------------------------------------------------- Region

Region::Region(std::vector<int> sites, const Window& context) : sites_(std::move(sites)), window_(context) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  for (int s : sites_) {
    if (!window_.contains(s)) {
      throw PreconditionError("site " + std::to_string(s) + " lies outside window [" +
                              std::to_string(window_.lo()) + ", " + std::to_string(window_.hi()) + "]");
    }
  }
}

Region Region::interval(int a, int b, const Window& context) {
  std::vector<int> s;
  for (int i = a; i <= b; ++i) s.push_back(i);
  return Region(std::move(s), context);
}

Region Region::whole(const Window& w) { return interval(w.lo(), w.hi(), w); }
Region Region::none(const Window& w) { return Region({}, w); }

bool Region::contains(int site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
}

bool Region::disjoint(const Region& other) const {
  return std::none_of(other.sites_.begin(), other.sites_.end(), [this](int s) { return contains(s); });
}

bool Region::is_contiguous() const {
  return sites_.empty() || sites_.back() - sites_.front() + 1 == static_cast<int>(sites_.size());
}

std::uint64_t Region::mask() const {
  std::uint64_t m = 0;
  for (int s : sites_) m |= detail::position_bit(window_.size(), window_.position(s));
  return m;
}

Region Region::complement() const { return Region::whole(window_).minus(*this); }

Region Region::united(const Region& other) const {
  std::vector<int> s = sites_;
  s.insert(s.end(), other.sites_.begin(), other.sites_.end());
  return Region(std::move(s), window_);
}

Region Region::intersected(const Region& other) const {
  std::vector<int> s;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(s));
  return Region(std::move(s), window_);
}

Region Region::minus(const Region& other) const {
  std::vector<int> s;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(s));
  return Region(std::move(s), window_);
}

int Region::rank(int site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) {
    throw PreconditionError("site " + std::to_string(site) + " is not in region " + to_string(*this));
  }
  return static_cast<int>(it - sites_.begin());
}

std::string to_string(const Region& r) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < r.sites().size(); ++i) {
    if (i) os << ' ';
    os << r.sites()[i];
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------- generators

namespace detail {

PauliSum generator_string(int sites, int position, Statistics s, Generator g) {
  const std::uint64_t bit = position_bit(sites, position);
  const cplx i1(0.0, 1.0);
  switch (g) {
    case Generator::Identity:
      return PauliSum::identity(sites);
    case Generator::X:
      if (s != Statistics::Spin) break;
      return PauliSum::string(sites, {bit, 0});
    case Generator::Y:
      if (s != Statistics::Spin) break;
      return PauliSum::string(sites, {bit, bit}, i1);
    case Generator::Z:
      if (s != Statistics::Spin) break;
      return PauliSum::string(sites, {0, bit});
    case Generator::C:
    case Generator::Cdag: {
      if (s != Statistics::Fermion) break;
      // c = Z_{<p} (X - XZ)/2, c^dagger = Z_{<p} (X + XZ)/2
      const std::uint64_t str = left_mask(sites, position);
      const double sgn = g == Generator::C ? -0.5 : 0.5;
      PauliSum out(sites);
      out.add({bit, str}, 0.5);
      out.add({bit, str | bit}, sgn);
      return out;
    }
    case Generator::N: {
      if (s != Statistics::Fermion) break;
      // n = (1 - Z)/2
      PauliSum out(sites);
      out.add({}, 0.5);
      out.add({0, bit}, -0.5);
      return out;
    }
  }
  throw PreconditionError("generator not available for " + to_string(s) + " statistics");
}

}  // namespace detail

// ---------------------------------------------------------------- parity

Eigen::VectorXd parity_diagonal(std::size_t dim) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) p(static_cast<Eigen::Index>(j)) = detail::popcount_parity(j) ? -1.0 : 1.0;
  return p;
}

Matrix parity_conjugate(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (detail::popcount_parity(static_cast<std::uint64_t>(i ^ j))) out(i, j) = -out(i, j);
    }
  }
  return out;
}

Parity classify_parity(const Matrix& m, Statistics s, double tol) {
  if (s == Statistics::Spin) return Parity::Even;
  double even = 0.0;
  double odd = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (detail::popcount_parity(static_cast<std::uint64_t>(i ^ j))) {
        odd = std::max(odd, a);
      } else {
        even = std::max(even, a);
      }
    }
  }
  const double scale = tol * std::max(1.0, std::max(even, odd));
  if (odd <= scale) return Parity::Even;
  if (even <= scale) return Parity::Odd;
  return Parity::Mixed;
}

// ---------------------------------------------------------------- LocalOperator

LocalOperator::LocalOperator(Matrix matrix, Region support)
    : matrix_(std::move(matrix)), support_(std::move(support)), parity_(Parity::Even) {
  const auto dim = static_cast<Eigen::Index>(window().dim());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw PreconditionError("operator matrix does not match the window dimension");
  }
  parity_ = classify_parity(matrix_, window().statistics());
}

LocalOperator LocalOperator::adjoint() const { return LocalOperator(matrix_.adjoint(), support_); }

namespace {
void require_same_window(const LocalOperator& a, const LocalOperator& b) {
  if (!(a.window() == b.window())) throw PreconditionError("operators live on different windows");
}
}  // namespace

LocalOperator LocalOperator::operator+(const LocalOperator& other) const {
  require_same_window(*this, other);
  return LocalOperator(matrix_ + other.matrix_, support_.united(other.support_));
}

LocalOperator LocalOperator::operator-(const LocalOperator& other) const {
  require_same_window(*this, other);
  return LocalOperator(matrix_ - other.matrix_, support_.united(other.support_));
}

LocalOperator LocalOperator::operator*(const LocalOperator& other) const {
  require_same_window(*this, other);
  return LocalOperator(matrix_ * other.matrix_, support_.united(other.support_));
}

LocalOperator LocalOperator::operator*(cplx s) const { return LocalOperator(matrix_ * s, support_); }

LocalOperator LocalOperator::identity(const Window& w) {
  w.require_within_cap();
  const auto d = static_cast<Eigen::Index>(w.dim());
  return LocalOperator(Matrix::Identity(d, d), Region::none(w));
}

LocalOperator LocalOperator::zero(const Window& w) {
  w.require_within_cap();
  const auto d = static_cast<Eigen::Index>(w.dim());
  return LocalOperator(Matrix::Zero(d, d), Region::none(w));
}

LocalOperator site_operator(const Window& w, int site, Generator g) {
  w.require_within_cap();
  if (!w.contains(site)) throw PreconditionError("site outside window");
  Matrix m = detail::generator_string(w.size(), w.position(site), w.statistics(), g).dense();
  return LocalOperator(std::move(m), g == Generator::Identity ? Region::none(w) : Region({site}, w));
}

std::map<int, SiteGenerators> site_operators(const Window& w) {
  w.require_within_cap();
  std::map<int, SiteGenerators> out;
  for (int s = w.lo(); s <= w.hi(); ++s) {
    if (w.statistics() == Statistics::Spin) {
      out.emplace(s, SpinGenerators{site_operator(w, s, Generator::X), site_operator(w, s, Generator::Y),
                                    site_operator(w, s, Generator::Z)});
    } else {
      out.emplace(s, FermionGenerators{site_operator(w, s, Generator::C), site_operator(w, s, Generator::Cdag)});
    }
  }
  return out;
}

LocalOperator parity_map(const LocalOperator& op) {
  if (op.window().statistics() == Statistics::Spin) return op;
  return LocalOperator(parity_conjugate(op.matrix()), op.support());
}

GradedPart even_odd_decompose(const LocalOperator& op) {
  if (op.window().statistics() == Statistics::Spin) {
    return {op, LocalOperator::zero(op.window())};
  }
  // (op +- Theta(op))/2 keeps the entries whose row/column parities agree / differ.
  Matrix even = Matrix::Zero(op.matrix().rows(), op.matrix().cols());
  Matrix odd = even;
  for (Eigen::Index j = 0; j < even.cols(); ++j) {
    for (Eigen::Index i = 0; i < even.rows(); ++i) {
      if (detail::popcount_parity(static_cast<std::uint64_t>(i ^ j))) {
        odd(i, j) = op.matrix()(i, j);
      } else {
        even(i, j) = op.matrix()(i, j);
      }
    }
  }
  return {LocalOperator(std::move(even), op.support()), LocalOperator(std::move(odd), op.support())};
}

int theta_sign(Parity p, Parity q) {
  if (p == Parity::Mixed || q == Parity::Mixed) {
    throw ContractError("theta_sign requires operators of definite parity");
  }
  return (p == Parity::Odd && q == Parity::Odd) ? -1 : 1;
}

double graded_locality_check(const LocalOperator& a, const LocalOperator& b) {
  require_same_window(a, b);
  if (!a.support().disjoint(b.support())) {
    throw PreconditionError("graded locality needs disjoint supports");
  }
  const double theta = theta_sign(a.parity(), b.parity());
  Matrix r = a.matrix() * b.matrix() - theta * (b.matrix() * a.matrix());
  return linalg::operator_norm(r);
}

// ---------------------------------------------------------------- RegionSplit

RegionSplit::RegionSplit(const Region& frame, const Region& first)
    : frame_(frame), first_(first), rest_(frame.minus(first)) {
  if (!frame.contains(first)) throw PreconditionError("split region must lie inside the frame");
  const int n = static_cast<int>(frame.size());
  if (n > kMaxWindowSites) throw ResourceError("region split exceeds the dense cap");
  n_first_ = static_cast<int>(first.size());
  n_rest_ = n - n_first_;

  std::vector<int> order;  // frame positions in split order
  std::vector<bool> in_first(static_cast<std::size_t>(n), false);
  for (int s : first.sites()) in_first[static_cast<std::size_t>(frame.rank(s))] = true;
  for (int p = 0; p < n; ++p)
    if (in_first[static_cast<std::size_t>(p)]) order.push_back(p);
  for (int p = 0; p < n; ++p)
    if (!in_first[static_cast<std::size_t>(p)]) order.push_back(p);

  const bool fermion = frame.statistics() == Statistics::Fermion;
  const std::size_t dim = std::size_t{1} << n;
  split_index_.resize(dim);
  sign_.assign(dim, 1.0);
  for (std::size_t j = 0; j < dim; ++j) {
    auto occupied = [&](int p) { return (j >> (n - 1 - p)) & 1U; };
    std::uint32_t idx = 0;
    for (int k = 0; k < n; ++k) {
      idx = (idx << 1) | static_cast<std::uint32_t>(occupied(order[static_cast<std::size_t>(k)]));
    }
    split_index_[j] = idx;
    if (fermion) {
      // Moving the occupied first-part modes ahead of the occupied rest modes
      // that precede them in the frame order costs one sign per crossing.
      int crossings = 0;
      int rest_seen = 0;
      for (int p = 0; p < n; ++p) {
        if (!occupied(p)) continue;
        if (in_first[static_cast<std::size_t>(p)]) {
          crossings += rest_seen;
        } else {
          ++rest_seen;
        }
      }
      if (crossings & 1) sign_[j] = -1.0;
    }
  }
}

Matrix RegionSplit::to_split(const Matrix& frame_rep) const {
  const auto dim = static_cast<Eigen::Index>(split_index_.size());
  if (frame_rep.rows() != dim || frame_rep.cols() != dim) {
    throw PreconditionError("matrix does not match the split frame");
  }
  Matrix out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto sj = static_cast<Eigen::Index>(split_index_[static_cast<std::size_t>(j)]);
    const double gj = sign_[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < dim; ++i) {
      out(static_cast<Eigen::Index>(split_index_[static_cast<std::size_t>(i)]), sj) =
          sign_[static_cast<std::size_t>(i)] * gj * frame_rep(i, j);
    }
  }
  return out;
}

Matrix RegionSplit::to_frame(const Matrix& split_rep) const {
  const auto dim = static_cast<Eigen::Index>(split_index_.size());
  if (split_rep.rows() != dim || split_rep.cols() != dim) {
    throw PreconditionError("matrix does not match the split frame");
  }
  Matrix out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto sj = static_cast<Eigen::Index>(split_index_[static_cast<std::size_t>(j)]);
    const double gj = sign_[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < dim; ++i) {
      out(i, j) = sign_[static_cast<std::size_t>(i)] * gj *
                  split_rep(static_cast<Eigen::Index>(split_index_[static_cast<std::size_t>(i)]), sj);
    }
  }
  return out;
}

Matrix RegionSplit::trace_out_rest(const Matrix& frame_rep) const {
  const std::size_t dim = split_index_.size();
  if (static_cast<std::size_t>(frame_rep.rows()) != dim) {
    throw PreconditionError("matrix does not match the split frame");
  }
  std::vector<std::uint32_t> frame_of(dim);
  for (std::size_t j = 0; j < dim; ++j) frame_of[split_index_[j]] = static_cast<std::uint32_t>(j);

  const std::size_t da = first_dim();
  const std::size_t db = rest_dim();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
  for (std::size_t a2 = 0; a2 < da; ++a2) {
    for (std::size_t a1 = 0; a1 < da; ++a1) {
      cplx acc = 0.0;
      for (std::size_t b = 0; b < db; ++b) {
        const std::uint32_t i = frame_of[a1 * db + b];
        const std::uint32_t j = frame_of[a2 * db + b];
        acc += sign_[i] * sign_[j] * frame_rep(i, j);
      }
      out(static_cast<Eigen::Index>(a1), static_cast<Eigen::Index>(a2)) = acc;
    }
  }
  return out;
}

LocalOperator embed(const Matrix& local, const Region& region) {
  const Window& w = region.window();
  w.require_within_cap();
  if (static_cast<std::size_t>(local.rows()) != region.dim() || local.rows() != local.cols()) {
    throw PreconditionError("embedded operator does not match the region dimension");
  }
  RegionSplit split(Region::whole(w), region);
  const auto db = static_cast<Eigen::Index>(split.rest_dim());
  Matrix frame = split.to_frame(linalg::kron(local, Matrix::Identity(db, db)));
  return LocalOperator(std::move(frame), region);
}

}  // namespace arealaw
