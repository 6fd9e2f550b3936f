#pragma once

// Operator algebra of a finite window of a 1-D chain.
//
// Spin-1/2 chains use the tensor-product representation; spinless fermions
// use Jordan-Wigner with the string ordered by ascending site:
//   c_i = (prod_{j<i} Z_j) (X_i + i Y_i) / 2.
// Every operator materializes at the full window dimension.

#include "arealaw/core.hpp"

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace arealaw {

inline constexpr int kMaxWindowSites = 14;

class Window {
 public:
  Window(int lo, int hi, Statistics statistics);

  /// Window [0, n-1].
  static Window of_size(int n, Statistics statistics);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int size() const { return hi_ - lo_ + 1; }
  std::size_t dim() const { return std::size_t{1} << size(); }
  Statistics statistics() const { return statistics_; }

  bool contains(int site) const { return site >= lo_ && site <= hi_; }
  int position(int site) const { return site - lo_; }

  /// Throws ResourceError when the dense representation would exceed the cap.
  void require_within_cap(int cap = kMaxWindowSites) const;

  bool operator==(const Window&) const = default;

 private:
  int lo_;
  int hi_;
  Statistics statistics_;
};

/// Ordered set of sites inside a window. Need not be contiguous.
class Region {
 public:
  Region(std::vector<int> sites, const Window& context);

  static Region interval(int a, int b, const Window& context);
  static Region whole(const Window& w);
  static Region none(const Window& w);

  const std::vector<int>& sites() const { return sites_; }
  const Window& window() const { return window_; }
  Statistics statistics() const { return window_.statistics(); }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  std::size_t dim() const { return std::size_t{1} << sites_.size(); }

  bool contains(int site) const;
  bool contains(const Region& other) const;
  bool disjoint(const Region& other) const;
  bool is_contiguous() const;

  /// Bit mask of the region's sites in the window's dense index.
  std::uint64_t mask() const;

  Region complement() const;
  Region united(const Region& other) const;
  Region intersected(const Region& other) const;
  Region minus(const Region& other) const;

  /// Index of `site` inside the region's ordered site list.
  int rank(int site) const;

  bool operator==(const Region& other) const {
    return sites_ == other.sites_ && window_ == other.window_;
  }

 private:
  std::vector<int> sites_;
  Window window_;
};

std::string to_string(const Region& r);

/// Local generators used by operator templates.
enum class Generator { Identity, X, Y, Z, C, Cdag, N };

class LocalOperator {
 public:
  /// `matrix` is in the representation of the whole window of `support`.
  LocalOperator(Matrix matrix, Region support);

  const Matrix& matrix() const { return matrix_; }
  const Region& support() const { return support_; }
  const Window& window() const { return support_.window(); }
  Parity parity() const { return parity_; }

  LocalOperator adjoint() const;
  LocalOperator operator+(const LocalOperator& other) const;
  LocalOperator operator-(const LocalOperator& other) const;
  LocalOperator operator*(const LocalOperator& other) const;
  LocalOperator operator*(cplx s) const;

  static LocalOperator identity(const Window& w);
  static LocalOperator zero(const Window& w);

 private:
  Matrix matrix_;
  Region support_;
  Parity parity_;
};

struct GradedPart {
  LocalOperator even;
  LocalOperator odd;
};

struct SpinGenerators {
  LocalOperator x, y, z;
};
struct FermionGenerators {
  LocalOperator c, cdag;
};
using SiteGenerators = std::variant<SpinGenerators, FermionGenerators>;

/// Pauli X/Y/Z per site (spin) or Jordan-Wigner c, c^dagger (fermion).
std::map<int, SiteGenerators> site_operators(const Window& w);

/// One generator at one site, full window dimension.
LocalOperator site_operator(const Window& w, int site, Generator g);

/// Diagonal of the parity unitary P = prod (1 - 2 n_i) in the window basis.
Eigen::VectorXd parity_diagonal(std::size_t dim);

/// Theta(op) = P op P. Identity map for spin statistics.
LocalOperator parity_map(const LocalOperator& op);
Matrix parity_conjugate(const Matrix& m);

/// Parity of a bare matrix in the window basis. Spin always yields Even.
Parity classify_parity(const Matrix& m, Statistics s, double tol = 1e-12);

GradedPart even_odd_decompose(const LocalOperator& op);

/// -1 iff both arguments are Odd. Mixed input is a contract violation.
int theta_sign(Parity p, Parity q);

/// || a b - theta(a, b) b a || (operator norm).
double graded_locality_check(const LocalOperator& a, const LocalOperator& b);

/// Signed basis permutation between the representation of a frame region and
/// the split representation in which the sites of `first` come first (both
/// halves keep ascending order). For fermions this is the mode-reordering
/// unitary, so an operator of `first` becomes (op (x) 1) in the split frame
/// and an even operator of the rest becomes (1 (x) op).
class RegionSplit {
 public:
  RegionSplit(const Region& frame, const Region& first);

  std::size_t first_dim() const { return std::size_t{1} << n_first_; }
  std::size_t rest_dim() const { return std::size_t{1} << n_rest_; }
  const Region& frame() const { return frame_; }
  const Region& first() const { return first_; }
  const Region& rest() const { return rest_; }

  /// Matrix in the frame representation -> split representation.
  Matrix to_split(const Matrix& frame_rep) const;
  /// Split representation -> frame representation.
  Matrix to_frame(const Matrix& split_rep) const;

  /// Partial trace over the rest, result in the canonical rep of `first`.
  Matrix trace_out_rest(const Matrix& frame_rep) const;

 private:
  Region frame_;
  Region first_;
  Region rest_;
  int n_first_;
  int n_rest_;
  std::vector<std::uint32_t> split_index_;  // frame index -> split index
  std::vector<double> sign_;                // frame index -> +-1
};

/// Embed an operator given in the canonical representation of `region`
/// (sites relabelled 0..|region|-1 in ascending order) into the full window.
LocalOperator embed(const Matrix& local, const Region& region);

}  // namespace arealaw
