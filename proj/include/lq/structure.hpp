// structure.hpp — real structure matrices of the covariance equation of motion
//   d/dt G = X G + G X^T + 2 sum_s Z_s G Z_s^T + Y
// and its vectorized generator K = X kron 1 + 1 kron X + 2 sum_s Z_s kron Z_s.
//
// Real forms (equivalent to the complex definitions, cross-checked in tests
// and against the brute-force Fock-space generator):
//   fermion: X = 2h - B_r + 2 sum m_s^2,  Y = B_i,          Z_s = -sqrt2 m_s,
//            X0 = 2h - B_r
//   boson:   X = 2 Om h - Om B_i + 2 sum (Om m_s)^2, Y = -Om B_r Om,
//            Z_s = -sqrt2 Om m_s, X0 = 2 Om h - Om B_i     (Om = omega_matrix)
//
// The Z normalization makes 2 sum_s Z_s G Z_s^T reproduce the double-
// commutator dissipator -1/2 sum_s [M_s, [M_s, .]] exactly; it also keeps the
// fermionic generator dissipative, K = ... - 2 sum_s (M kron 1 + 1 kron M)^2.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lq/common.hpp"
#include "lq/model.hpp"
#include "lq/numeric.hpp"

namespace lq {

struct StructureSet {
  Statistics statistics = Statistics::Fermion;
  int n_modes = 0;
  MatrixXd x;
  MatrixXd y;
  std::vector<MatrixXd> z;
  MatrixXd x0;     // quasi-free part of X (no quadratic-jump contribution)
  MatrixXd omega;  // bosons only; empty for fermions

  int dim() const { return 2 * n_modes; }
  bool quasi_free() const { return z.empty(); }
};

inline StructureSet build_structure(const ModelSpec& model, const JumpMatrixB& b) {
  const int d = model.dim();
  StructureSet s;
  s.statistics = model.statistics;
  s.n_modes = model.n_modes;

  if (model.statistics == Statistics::Fermion) {
    s.x0 = 2.0 * model.h - b.b_r;
    s.x = s.x0;
    for (const MatrixXd& m : model.quadratic_jumps) {
      s.x += 2.0 * (m * m);
      s.z.push_back(-std::sqrt(2.0) * m);
    }
    s.y = b.b_i;
  } else {
    const MatrixXd om = omega_matrix(model.n_modes);
    s.omega = om;
    s.x0 = 2.0 * om * model.h - om * b.b_i;
    s.x = s.x0;
    for (const MatrixXd& m : model.quadratic_jumps) {
      const MatrixXd omm = om * m;
      s.x += 2.0 * (omm * omm);
      s.z.push_back(-std::sqrt(2.0) * omm);
    }
    s.y = -om * b.b_r * om;
  }
  if (!s.x.allFinite() || !s.y.allFinite())
    throw NumericError("build_structure: non-finite structure matrix");
  (void)d;
  return s;
}

inline StructureSet build_structure(const ModelSpec& model) {
  return build_structure(model, build_jump_matrix(model));
}

/// Right-hand side of the covariance equation of motion without the constant
/// drive: X G + G X^T + 2 sum_s Z_s G Z_s^T.
inline MatrixXd apply_generator(const StructureSet& s, const MatrixXd& gamma) {
  MatrixXd out = s.x * gamma + gamma * s.x.transpose();
  for (const MatrixXd& z : s.z) out += 2.0 * (z * gamma * z.transpose());
  return out;
}

/// Full right-hand side including the drive Y.
inline MatrixXd eom_rhs(const StructureSet& s, const MatrixXd& gamma) {
  return apply_generator(s, gamma) + s.y;
}

/// Dense 4n^2 x 4n^2 generator. Refuses to materialize above the mode cap
/// (memory grows as 16 n^4); use apply_generator for larger systems.
inline MatrixXd build_generator_K(const StructureSet& s, int dense_mode_cap = 32) {
  if (s.n_modes > dense_mode_cap)
    throw ValidationError("build_generator_K: n_modes = " + std::to_string(s.n_modes) +
                          " exceeds the dense cap " + std::to_string(dense_mode_cap) +
                          "; use the matrix-free action instead");
  const int d = s.dim();
  const MatrixXd id = MatrixXd::Identity(d, d);
  MatrixXd k = kron(s.x, id) + kron(id, s.x);
  for (const MatrixXd& z : s.z) k += 2.0 * kron(z, z);
  return k;
}

}  // namespace lq
