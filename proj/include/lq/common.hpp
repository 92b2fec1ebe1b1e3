// common.hpp — shared scalar types, error types, and basis conventions

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lq {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr Complex kI{0.0, 1.0};

/// Raised when an input document, matrix, or argument violates a contract.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure cannot deliver its result
/// (singular generator, eigensolver failure, step-size underflow, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the moment hierarchy when the generated equations of motion
/// produce a term of higher degree than the source monomial. This never
/// happens for a correct algebra; it is an internal consistency tripwire.
class ClosureViolation : public NumericError {
 public:
  using NumericError::NumericError;
};

enum class Statistics { Fermion, Boson };

inline std::string to_string(Statistics s) {
  return s == Statistics::Fermion ? "fermion" : "boson";
}

namespace tol {
// Symmetry of input matrices (hard validation error beyond this).
inline constexpr double symmetry = 1e-12;
// Positive semi-definiteness slack for the jump matrix B.
inline constexpr double psd = 1e-12;
// Realness of B_r / B_i and of real-form structure matrices.
inline constexpr double realness = 1e-14;
// Default physicality witness tolerance.
inline constexpr double physical = 1e-9;
// Stability classification of eigenvalue real parts.
inline constexpr double stability = 1e-9;
// Coefficient pruning threshold of the symbolic algebra. Exactness tests
// may set the per-call threshold to 0.
inline constexpr double prune = 1e-15;
// Relative singular-value threshold for kernel detection in steady solves.
inline constexpr double kernel = 1e-10;
}  // namespace tol

// Majorana index layout for n modes, both statistics: index j in [0, n)
// is the "+" (position-like) operator of mode j, index n + j the "-"
// (momentum-like) one. All structure matrices are 2n x 2n in this layout.

/// Symplectic form Omega = [[0, -1_n], [1_n, 0]]; Omega^2 = -1.
inline MatrixXd omega_matrix(int n_modes) {
  MatrixXd om = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  om.topRightCorner(n_modes, n_modes) = -MatrixXd::Identity(n_modes, n_modes);
  om.bottomLeftCorner(n_modes, n_modes) = MatrixXd::Identity(n_modes, n_modes);
  return om;
}

/// Commutator table of the bosonic Majorana basis: [w_a, w_b] = tau_ab,
/// tau = i * Omega (purely imaginary, antisymmetric).
inline MatrixXcd tau_matrix(int n_modes) {
  return kI * omega_matrix(n_modes);
}

/// Commutator entry [w_a, w_b] for bosons without materializing the matrix:
/// -i when b = a + n, +i when a = b + n, else 0.
inline Complex tau_entry(int a, int b, int n_modes) {
  if (b == a + n_modes) return Complex{0.0, -1.0};
  if (a == b + n_modes) return Complex{0.0, 1.0};
  return Complex{0.0, 0.0};
}

}  // namespace lq
