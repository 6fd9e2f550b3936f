#include "arealaw/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace arealaw {

std::string to_string(Statistics s) { return s == Statistics::Spin ? "spin" : "fermion"; }

std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
  }
  return "mixed";
}

namespace linalg {

namespace {

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw PreconditionError(std::string(what) + ": matrix is not square");
  }
}

void lapack_status(lapack_int info, const char* driver) {
  if (info != 0) {
    throw std::runtime_error(std::string(driver) + " failed with info=" + std::to_string(info));
  }
}

double backend_error() {
  const Eigen::Index n = 320;
  std::uint32_t state = 12345;
  auto next = [&] {
    state = state * 1103515245u + 12345u;
    return static_cast<double>((state >> 8) & 0xffff) / 65536.0 - 0.5;
  };
  RealMatrix a(n, n), b(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) a(i, j) = a(j, i) = next();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) b(i, j) = next();
  const RealMatrix c = a * b;
  double worst = (c - a.lazyProduct(b)).cwiseAbs().maxCoeff();
  RealMatrix v = a;
  RealVector w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), v.data(), static_cast<lapack_int>(n),
                     w.data()) != 0) {
    return std::numeric_limits<double>::infinity();
  }
  const RealMatrix r = a.lazyProduct(v) - v * w.asDiagonal();
  worst = std::max(worst, r.cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

void require_working_backend() {
  static const double error = backend_error();
  if (!(error < 1e-9)) {
    throw BackendError("BLAS/LAPACK self-test failed (error " + std::to_string(error) +
                       "); select other kernels, e.g. OPENBLAS_CORETYPE=SkylakeX or Haswell");
  }
}

Matrix EigenSystem::complex_vectors() const {
  if (const auto* r = std::get_if<RealMatrix>(&vectors)) return r->cast<cplx>();
  return std::get<Matrix>(vectors);
}

bool is_exactly_real(const Matrix& m) {
  const cplx* p = m.data();
  const Eigen::Index n = m.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p[i].imag() != 0.0) return false;
  }
  return true;
}

double hermiticity_residual(const Matrix& m) {
  check_square(m, "hermiticity_residual");
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const Matrix& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermiticity_residual(m) <= tol * scale;
}

EigenSystem eigh(const Matrix& h) {
  check_square(h, "eigh");
  require_working_backend();
  const auto n = static_cast<lapack_int>(h.rows());
  EigenSystem es;
  es.values.resize(n);
  if (n == 0) {
    es.vectors = RealMatrix(0, 0);
    return es;
  }
  if (is_exactly_real(h)) {
    RealMatrix a = h.real();
    lapack_status(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, es.values.data()),
                  "dsyevd");
    es.vectors = std::move(a);
  } else {
    Matrix a = h;
    lapack_status(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, es.values.data()),
                  "zheevd");
    es.vectors = std::move(a);
  }
  return es;
}

RealVector eigvalsh(const Matrix& h) {
  check_square(h, "eigvalsh");
  require_working_backend();
  const auto n = static_cast<lapack_int>(h.rows());
  RealVector w(n);
  if (n == 0) return w;
  if (is_exactly_real(h)) {
    RealMatrix a = h.real();
    lapack_status(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "dsyevd");
  } else {
    Matrix a = h;
    lapack_status(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "zheevd");
  }
  return w;
}

Matrix reconstruct(const EigenSystem& es, const RealVector& f) {
  if (const auto* v = std::get_if<RealMatrix>(&es.vectors)) {
    RealMatrix scaled = (*v) * f.asDiagonal();
    RealMatrix out = scaled * v->transpose();
    return out.cast<cplx>();
  }
  const auto& v = std::get<Matrix>(es.vectors);
  Matrix scaled = v * f.cast<cplx>().asDiagonal();
  return scaled * v.adjoint();
}

Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f) {
  EigenSystem es = eigh(h);
  RealVector fv = es.values.unaryExpr(f);
  return reconstruct(es, fv);
}

Matrix unitary_evolution(const Matrix& h, double t) {
  EigenSystem es = eigh(h);
  Matrix v = es.complex_vectors();
  Eigen::VectorXcd phases(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, t * es.values(k)));
  }
  Matrix scaled = v * phases.asDiagonal();
  return scaled * v.adjoint();
}

double spectral_norm_hermitian(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  RealVector w = eigvalsh(h);
  return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && is_hermitian(m, 1e-14)) return spectral_norm_hermitian(m);
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && is_hermitian(m, 1e-14)) {
    return eigvalsh(m).cwiseAbs().sum();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw PreconditionError("trace_product: incompatible shapes");
  }
  return a.transpose().cwiseProduct(b).sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double entropy_of_spectrum(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double x = p(i);
    if (x > 0.0) s -= x * std::log(std::max(x, kLogFloor));
  }
  return s;
}

}  // namespace linalg
}  // namespace arealaw
