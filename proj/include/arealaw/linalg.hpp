#pragma once

// Dense Hermitian linear algebra used by every module. Eigendecompositions go
// through LAPACK's divide-and-conquer drivers; real-valued inputs (all catalog
// Hamiltonians in the Jordan-Wigner basis) take the real symmetric path.

#include "arealaw/core.hpp"

#include <functional>
#include <variant>

namespace arealaw::linalg {

/// Eigenvalues ascending; columns of the vector matrix are eigenvectors.
struct EigenSystem {
  RealVector values;
  std::variant<RealMatrix, Matrix> vectors;

  bool real() const { return std::holds_alternative<RealMatrix>(vectors); }
  Matrix complex_vectors() const;
};

/// Runs once per process before the first decomposition: checks a 320x320
/// product and eigendecomposition against plain loops. Throws BackendError
/// when the backend returns wrong numbers (seen with some OpenBLAS kernel
/// selections; OPENBLAS_CORETYPE picks another kernel).
void require_working_backend();

bool is_exactly_real(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-12);
double hermiticity_residual(const Matrix& m);

EigenSystem eigh(const Matrix& h);
RealVector eigvalsh(const Matrix& h);

/// V diag(f) V^dagger.
Matrix reconstruct(const EigenSystem& es, const RealVector& f);

/// f applied to the spectrum of a Hermitian matrix.
Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f);

/// exp(i t H) for Hermitian H.
Matrix unitary_evolution(const Matrix& h, double t);

/// Largest |eigenvalue| of a Hermitian matrix.
double spectral_norm_hermitian(const Matrix& h);

/// Operator norm (largest singular value) of an arbitrary matrix.
double operator_norm(const Matrix& m);

/// Sum of singular values. Hermitian input uses |eigenvalues|, which are the
/// singular values.
double trace_norm(const Matrix& m);

/// Tr(A B) without forming the product.
cplx trace_product(const Matrix& a, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);

/// Floor applied to density eigenvalues before taking logarithms.
inline constexpr double kLogFloor = 1e-300;

/// -sum p log p over a spectrum; non-positive entries contribute zero.
double entropy_of_spectrum(const RealVector& p);

}  // namespace arealaw::linalg
