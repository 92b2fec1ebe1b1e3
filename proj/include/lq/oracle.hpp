// oracle.hpp — brute-force ground truth on the (truncated) Fock space:
// explicit ladder/Majorana operators, the dense Liouvillian superoperator,
// trajectories, spectra, covariance extraction, and Gaussian-state synthesis.
// Everything here is deliberately direct; the covariance/spectrum/algebra
// modules are validated against it at small system size.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lq/common.hpp"
#include "lq/covdyn.hpp"
#include "lq/model.hpp"
#include "lq/numeric.hpp"

namespace lq {

struct FockRep {
  Statistics statistics = Statistics::Fermion;
  int n_modes = 0;
  int cutoff = 2;   // per-mode dimension; fermions always 2
  long dim = 0;     // cutoff^n
  std::vector<MatrixXcd> a;   // annihilation operators
  std::vector<MatrixXcd> ad;  // creation operators
  std::vector<MatrixXcd> w;   // Majorana operators, library index layout
  MatrixXcd parity;           // (-1)^N; fermions
};

/// Builds dense mode operators. Fermions use Jordan-Wigner strings so the CAR
/// and the parity operator hold exactly; bosons truncate at `cutoff` levels,
/// leaving the known commutator defect [a, a^dag] = 1 - d |d-1><d-1|.
inline FockRep make_fock_rep(Statistics statistics, int n_modes, int cutoff,
                             long max_superop_dim = 4096) {
  if (n_modes <= 0) throw ValidationError("make_fock_rep: n_modes must be positive");
  if (statistics == Statistics::Fermion)
    cutoff = 2;
  else if (cutoff < 2)
    throw ValidationError("make_fock_rep: boson cutoff must be >= 2");

  double dims = std::pow(static_cast<double>(cutoff), n_modes);
  if (dims * dims > static_cast<double>(max_superop_dim))
    throw ValidationError("make_fock_rep: superoperator dimension " +
                          std::to_string(dims * dims) + " exceeds the cap " +
                          std::to_string(max_superop_dim));

  FockRep rep;
  rep.statistics = statistics;
  rep.n_modes = n_modes;
  rep.cutoff = cutoff;
  rep.dim = static_cast<long>(std::llround(dims));

  MatrixXcd a_local = MatrixXcd::Zero(cutoff, cutoff);
  for (int k = 0; k + 1 < cutoff; ++k) a_local(k, k + 1) = std::sqrt(double(k + 1));
  MatrixXcd z_local = MatrixXcd::Identity(cutoff, cutoff);
  if (statistics == Statistics::Fermion) z_local(1, 1) = -1.0;

  for (int j = 0; j < n_modes; ++j) {
    MatrixXcd op = MatrixXcd::Identity(1, 1);
    for (int k = 0; k < n_modes; ++k) {
      const MatrixXcd& factor =
          (k == j) ? a_local
                   : (statistics == Statistics::Fermion && k < j
                          ? z_local
                          : MatrixXcd::Identity(cutoff, cutoff).eval());
      op = kron(op, factor);
    }
    rep.a.push_back(op);
    rep.ad.push_back(op.adjoint());
  }

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  rep.w.resize(2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    rep.w[j] = (rep.a[j] + rep.ad[j]) * inv_sqrt2;
    rep.w[n_modes + j] = kI * (rep.a[j] - rep.ad[j]) * inv_sqrt2;
  }

  if (statistics == Statistics::Fermion) {
    rep.parity = MatrixXcd::Identity(1, 1);
    for (int k = 0; k < n_modes; ++k) rep.parity = kron(rep.parity, z_local).eval();
  }
  return rep;
}

/// Dense Hamiltonian sum_ij Hc_ij w_i w_j with the complex coefficient matrix
/// (fermion: i*h; boson: h).
inline MatrixXcd hamiltonian_op(const FockRep& rep, const ModelSpec& model) {
  MatrixXcd hc = model.statistics == Statistics::Fermion
                     ? (kI * model.h.cast<Complex>()).eval()
                     : model.h.cast<Complex>().eval();
  MatrixXcd op = MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < model.dim(); ++i)
    for (int j = 0; j < model.dim(); ++j)
      if (hc(i, j) != Complex{0.0, 0.0}) op += hc(i, j) * (rep.w[i] * rep.w[j]);
  return op;
}

inline MatrixXcd linear_jump_op(const FockRep& rep, const VectorXcd& coeffs) {
  MatrixXcd op = MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) != Complex{0.0, 0.0}) op += coeffs(i) * rep.w[i];
  return op;
}

inline MatrixXcd quadratic_jump_op(const FockRep& rep, const ModelSpec& model,
                                   const MatrixXd& m) {
  MatrixXcd mc = model.statistics == Statistics::Fermion
                     ? (kI * m.cast<Complex>()).eval()
                     : m.cast<Complex>().eval();
  MatrixXcd op = MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < model.dim(); ++i)
    for (int j = 0; j < model.dim(); ++j)
      if (mc(i, j) != Complex{0.0, 0.0}) op += mc(i, j) * (rep.w[i] * rep.w[j]);
  return op;
}

struct DenseLiouvillian {
  MatrixXcd matrix;  // D^2 x D^2, row-major vectorization
  long dim = 0;      // Hilbert-space dimension D
};

/// Assembles the full superoperator with vec(A rho B) = (A kron B^T) vec(rho).
inline DenseLiouvillian build_dense(const FockRep& rep, const ModelSpec& model) {
  const long d = rep.dim;
  const MatrixXcd id = MatrixXcd::Identity(d, d);
  DenseLiouvillian out;
  out.dim = d;
  out.matrix = MatrixXcd::Zero(d * d, d * d);

  const MatrixXcd h = hamiltonian_op(rep, model);
  out.matrix += -kI * (kron(h, id) - kron(id, h.transpose().eval()));

  auto add_dissipator = [&](const MatrixXcd& jump) {
    const MatrixXcd jj = jump.adjoint() * jump;
    out.matrix += kron(jump, jump.conjugate().eval());
    out.matrix -= 0.5 * kron(jj, id);
    out.matrix -= 0.5 * kron(id, jj.transpose().eval());
  };
  for (const VectorXcd& jump : model.linear_jumps)
    add_dissipator(linear_jump_op(rep, jump));
  for (const MatrixXd& m : model.quadratic_jumps)
    add_dissipator(quadratic_jump_op(rep, model, m));
  return out;
}

inline DenseLiouvillian build_dense(const ModelSpec& model, int cutoff,
                                    long max_superop_dim = 4096) {
  return build_dense(make_fock_rep(model.statistics, model.n_modes, cutoff, max_superop_dim),
                     model);
}

/// Applies the adjoint generator to an operator:
/// L^dag(O) = i[H,O] + sum_r (L^dag O L - {L^dag L, O}/2) + same for M_s.
inline MatrixXcd dense_adjoint_apply(const FockRep& rep, const ModelSpec& model,
                                     const MatrixXcd& op) {
  const MatrixXcd h = hamiltonian_op(rep, model);
  MatrixXcd out = kI * (h * op - op * h);
  auto add = [&](const MatrixXcd& jump) {
    const MatrixXcd jj = jump.adjoint() * jump;
    out += jump.adjoint() * op * jump - 0.5 * (jj * op + op * jj);
  };
  for (const VectorXcd& jump : model.linear_jumps) add(linear_jump_op(rep, jump));
  for (const MatrixXd& m : model.quadratic_jumps) add(quadratic_jump_op(rep, model, m));
  return out;
}

inline void validate_density_matrix(const MatrixXcd& rho, double tolerance = 1e-10) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tolerance)
    throw ValidationError("density matrix: not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > tolerance)
    throw ValidationError("density matrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance)
    throw ValidationError("density matrix: not positive semi-definite");
}

/// vec rho(t) = e^{Lt} vec rho0 by dense matrix exponential.
inline MatrixXcd dense_evolve(const DenseLiouvillian& liou, const MatrixXcd& rho0, double t) {
  validate_density_matrix(rho0);
  const VectorXcd v = expm((liou.matrix * t).eval()) * vec_rm(rho0);
  return unvec_rm(v, liou.dim, liou.dim);
}

/// Exact trace formulas for the covariance matrix of a state.
inline CovarianceMatrix covariance_from_rho(const FockRep& rep, const MatrixXcd& rho,
                                            double* imag_residue = nullptr) {
  const int d = 2 * rep.n_modes;
  MatrixXd gamma(d, d);
  double residue = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex val;
      if (rep.statistics == Statistics::Fermion)
        val = 0.5 * kI * ((rep.w[i] * rep.w[j] - rep.w[j] * rep.w[i]) * rho).trace();
      else
        val = 0.5 * ((rep.w[i] * rep.w[j] + rep.w[j] * rep.w[i]) * rho).trace();
      residue = std::max(residue, std::abs(val.imag()));
      gamma(i, j) = val.real();
    }
  }
  if (imag_residue) *imag_residue = residue;
  return CovarianceMatrix{rep.statistics, gamma};
}

/// All eigenvalues of the dense Liouvillian, deterministically sorted.
inline std::vector<Complex> dense_spectrum(const DenseLiouvillian& liou) {
  if (liou.matrix.size() == 0) return {};
  Eigen::ComplexEigenSolver<MatrixXcd> es(liou.matrix, false);
  if (es.info() != Eigen::Success) throw NumericError("dense_spectrum: eigensolver failed");
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  sort_eigs(out);
  return out;
}

/// Fermionic parity-sector spectra: the operator basis |p><q| splits by the
/// product of the state parities, and the Liouvillian is block diagonal in it.
/// Returns (even-sector eigenvalues, odd-sector eigenvalues, off-block norm).
struct SectorSpectra {
  std::vector<Complex> even;
  std::vector<Complex> odd;
  double off_block_norm = 0.0;
};

inline SectorSpectra sector_spectra(const FockRep& rep, const DenseLiouvillian& liou) {
  if (rep.statistics != Statistics::Fermion)
    throw ValidationError("sector_spectra: fermionic representations only");
  const long d = rep.dim;
  std::vector<int> even_idx, odd_idx;
  for (long p = 0; p < d; ++p) {
    for (long q = 0; q < d; ++q) {
      const double pp = rep.parity(p, p).real() * rep.parity(q, q).real();
      (pp > 0 ? even_idx : odd_idx).push_back(static_cast<int>(p * d + q));
    }
  }
  auto block = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    MatrixXcd b(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) b(i, j) = liou.matrix(rows[i], cols[j]);
    return b;
  };
  SectorSpectra out;
  out.off_block_norm =
      std::max(block(even_idx, odd_idx).norm(), block(odd_idx, even_idx).norm());
  auto eigs = [](const MatrixXcd& m) {
    Eigen::ComplexEigenSolver<MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericError("sector_spectra: eigensolver failed");
    std::vector<Complex> v(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    sort_eigs(v);
    return v;
  };
  out.even = eigs(block(even_idx, even_idx));
  out.odd = eigs(block(odd_idx, odd_idx));
  return out;
}

/// Steady state as the kernel vector of the dense Liouvillian, renormalized
/// into a density matrix. Returns the state and |lambda| of the chosen mode.
struct DenseSteadyState {
  MatrixXcd rho;
  double lambda_abs = 0.0;
};

inline DenseSteadyState dense_steady_state(const DenseLiouvillian& liou) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(liou.matrix, true);
  if (es.info() != Eigen::Success)
    throw NumericError("dense_steady_state: eigensolver failed");
  // smallest |lambda| among eigenvectors with non-negligible trace
  int best = -1;
  double best_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    MatrixXcd cand = unvec_rm(es.eigenvectors().col(i).eval(), liou.dim, liou.dim);
    if (std::abs(cand.trace()) < 1e-8) continue;
    const double lam = std::abs(es.eigenvalues()(i));
    if (lam < best_abs) {
      best_abs = lam;
      best = i;
    }
  }
  if (best < 0) throw NumericError("dense_steady_state: no trace-class kernel vector found");
  MatrixXcd rho = unvec_rm(es.eigenvectors().col(best).eval(), liou.dim, liou.dim);
  rho /= rho.trace();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DenseSteadyState{std::move(rho), best_abs};
}

// ---------------------------------------------------------------------------
// Gaussian-state synthesis.

/// Fermion: rotate the covariance to canonical 2x2 blocks by the orthogonal
/// Schur transformation and take the product of single-pair thermal factors
///   rho = prod_k (1/2 + 2 g_k i wt_{2k} wt_{2k+1})
/// in the rotated Majorana basis wt = Q^T w. Handles pure modes (|g| = 1/2)
/// without special-casing.
///
/// Boson: Williamson decomposition Gamma = S diag(nu,nu) S^T, then
///   rho ~ exp(-1/2 w . G w) with G = S^{-T} diag(beta,beta) S^{-1},
///   beta_k = ln((nu_k + 1/2)/(nu_k - 1/2)),
/// built with the dense truncated operators. Near-pure modes are clamped to a
/// large beta (limit state at the given cutoff).
inline MatrixXcd gaussian_state(const FockRep& rep, const CovarianceMatrix& gamma) {
  if (gamma.statistics != rep.statistics)
    throw ValidationError("gaussian_state: statistics mismatch");
  validate_covariance(gamma);
  const PhysicalityReport phys = check_physical(gamma);
  if (!phys.physical)
    throw ValidationError("gaussian_state: covariance matrix is not physical (witness " +
                          std::to_string(phys.witness) + ")");
  const int d = 2 * rep.n_modes;
  if (gamma.dim() != d) throw ValidationError("gaussian_state: dimension mismatch");

  if (rep.statistics == Statistics::Fermion) {
    AntisymCanonical canon = antisym_canonical_form(gamma.gamma);
    MatrixXcd rho = MatrixXcd::Identity(rep.dim, rep.dim);
    for (int k = 0; k < rep.n_modes; ++k) {
      MatrixXcd wu = MatrixXcd::Zero(rep.dim, rep.dim);
      MatrixXcd wv = MatrixXcd::Zero(rep.dim, rep.dim);
      for (int b = 0; b < d; ++b) {
        if (canon.q(b, 2 * k) != 0.0) wu += canon.q(b, 2 * k) * rep.w[b];
        if (canon.q(b, 2 * k + 1) != 0.0) wv += canon.q(b, 2 * k + 1) * rep.w[b];
      }
      rho = rho * (0.5 * MatrixXcd::Identity(rep.dim, rep.dim) +
                   2.0 * canon.gamma[k] * kI * (wu * wv));
    }
    return rho;
  }

  WilliamsonForm wf = williamson(gamma.gamma);
  VectorXd beta(rep.n_modes);
  for (int k = 0; k < rep.n_modes; ++k) {
    const double nu = wf.nu(k);
    beta(k) = std::log((nu + 0.5) / std::max(nu - 0.5, 1e-14));
  }
  VectorXd beta2(d);
  beta2 << beta, beta;
  const MatrixXd sinv = wf.s.inverse();
  const MatrixXd g = sinv.transpose() * beta2.asDiagonal() * sinv;

  MatrixXcd hg = MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (g(i, j) != 0.0) hg += 0.5 * g(i, j) * (rep.w[i] * rep.w[j]);
  MatrixXcd rho = expm((-hg).eval());
  rho /= rho.trace();
  return rho;
}

}  // namespace lq
