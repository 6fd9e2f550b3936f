#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace arealaw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Statistics { Spin, Fermion };

/// Grading of an operator under the parity automorphism. Spin operators are
/// always Even (the grading is trivial there).
enum class Parity { Even, Odd, Mixed };

std::string to_string(Statistics s);
std::string to_string(Parity p);

// Error taxonomy. Everything derives from a std exception so callers that do
// not care can catch std::exception.

/// A request exceeds the dense-matrix dimension cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (region outside window, overlap...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain (beta <= 0, non-faithful state).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Input violates a type contract (non-Hermitian perturbation, mixed parity).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Operation exists in the theory but is not available for this input.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An identity or inequality that must hold exactly failed beyond slack.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// The BLAS/LAPACK backend failed its startup correctness check.
struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace arealaw
