// covdyn.hpp — time evolution of covariance matrices, steady-state solves,
// and physicality checks.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lq/common.hpp"
#include "lq/numeric.hpp"
#include "lq/structure.hpp"

namespace lq {

struct CovarianceMatrix {
  Statistics statistics = Statistics::Fermion;
  MatrixXd gamma;

  int dim() const { return static_cast<int>(gamma.rows()); }
};

/// Validates the symmetry class (fermion: antisymmetric, boson: symmetric).
inline void validate_covariance(const CovarianceMatrix& g, double tolerance = tol::symmetry) {
  if (g.gamma.rows() != g.gamma.cols())
    throw ValidationError("covariance: matrix must be square");
  if (!g.gamma.allFinite()) throw ValidationError("covariance: non-finite entries");
  const double defect = g.statistics == Statistics::Fermion
                            ? (g.gamma + g.gamma.transpose()).cwiseAbs().maxCoeff()
                            : (g.gamma - g.gamma.transpose()).cwiseAbs().maxCoeff();
  if (defect > tolerance)
    throw ValidationError("covariance: symmetry class violated by " + std::to_string(defect));
}

/// Fermionic vacuum has pairs (j, j+n) occupied with +1/2; bosonic vacuum is
/// the symmetric ground-state covariance 1/2.
inline CovarianceMatrix vacuum_covariance(Statistics s, int n_modes) {
  const int d = 2 * n_modes;
  CovarianceMatrix g{s, MatrixXd::Zero(d, d)};
  if (s == Statistics::Fermion) {
    for (int j = 0; j < n_modes; ++j) {
      g.gamma(j, n_modes + j) = 0.5;
      g.gamma(n_modes + j, j) = -0.5;
    }
  } else {
    g.gamma = 0.5 * MatrixXd::Identity(d, d);
  }
  return g;
}

struct PhysicalityReport {
  bool physical = false;
  double witness = 0.0;  // fermion: 1/2 - ||G||_2; boson: min eig(G + i Om/2)
};

/// Physicality witness. Fermion: spectral norm at most 1/2. Boson: all
/// symplectic eigenvalues at least 1/2, tested through G + i Omega/2 >= 0.
inline PhysicalityReport check_physical(const CovarianceMatrix& g, double tolerance = tol::physical) {
  validate_covariance(g);
  PhysicalityReport out;
  if (g.statistics == Statistics::Fermion) {
    out.witness = 0.5 - spectral_norm(g.gamma);
  } else {
    const int n = g.dim() / 2;
    const MatrixXcd herm =
        g.gamma.cast<Complex>() + 0.5 * kI * omega_matrix(n).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("check_physical: eigensolver failed");
    out.witness = es.eigenvalues().minCoeff();
  }
  out.physical = out.witness >= -tolerance;
  return out;
}

struct SteadyStateResult {
  CovarianceMatrix gamma_ss;
  double residual = 0.0;      // ||X G + G X^T + 2 sum Z G Z^T + Y||_F
  bool unique = false;        // kernel_dimension == 0
  bool physical = false;
  int kernel_dimension = 0;   // dimension of the null space of K
  double symmetrization_defect = 0.0;  // residue discarded when reprojecting
};

/// Solves K vec(G) = -vec(Y). A singular K yields the minimum-norm
/// least-squares solution together with the kernel dimension; degeneracy is
/// reported, not treated as an error.
inline SteadyStateResult solve_steady(const StructureSet& s, int dense_mode_cap = 32) {
  const int d = s.dim();
  const MatrixXd k = build_generator_K(s, dense_mode_cap);
  const VectorXd rhs = -vec_rm(s.y);

  Eigen::BDCSVD<MatrixXd> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol::kernel);
  SteadyStateResult out;
  out.kernel_dimension = static_cast<int>(k.cols() - svd.rank());
  out.unique = out.kernel_dimension == 0;

  MatrixXd gamma = unvec_rm(svd.solve(rhs).eval(), d, d);
  out.symmetrization_defect = project_symmetry(s.statistics, gamma);
  out.gamma_ss = CovarianceMatrix{s.statistics, gamma};
  out.residual = (apply_generator(s, gamma) + s.y).norm();
  out.physical = check_physical(out.gamma_ss).physical;
  return out;
}

/// Closed-form propagation vec G(t) = e^{Kt}(vec G0 + K^{-1} vec Y) - K^{-1} vec Y
/// on the dense generator. Above the dense cap the same result is produced
/// matrix-free through a Krylov exponential action on the augmented operator
/// [[K, vec Y], [0, 0]], which avoids the explicit inverse.
inline CovarianceMatrix evolve_closed_form(const StructureSet& s, const CovarianceMatrix& gamma0,
                                           double t, int dense_mode_cap = 32) {
  if (gamma0.statistics != s.statistics)
    throw ValidationError("evolve_closed_form: statistics mismatch");
  validate_covariance(gamma0);
  const int d = s.dim();
  if (gamma0.dim() != d) throw ValidationError("evolve_closed_form: dimension mismatch");

  VectorXd result;
  if (s.n_modes <= dense_mode_cap) {
    const MatrixXd k = build_generator_K(s, dense_mode_cap);
    Eigen::PartialPivLU<MatrixXd> lu(k);
    if (lu.rcond() < 1e-12)
      throw NumericError(
          "evolve_closed_form: generator K is numerically singular; "
          "use evolve_integrate instead");
    const VectorXd ky = lu.solve(vec_rm(s.y));
    result = expm((k * t).eval()) * (vec_rm(gamma0.gamma) + ky) - ky;
  } else {
    // e^{At}[g0; 1] = [e^{Kt} g0 + t phi_1(Kt) vec Y; 1] for A = [[K, vec Y],[0,0]].
    const VectorXd y = vec_rm(s.y);
    VectorXd aug(y.size() + 1);
    aug << vec_rm(gamma0.gamma), 1.0;
    auto apply_aug = [&](const VectorXd& v) {
      const MatrixXd g = unvec_rm(v.head(y.size()).eval(), d, d);
      VectorXd out(v.size());
      out << vec_rm(apply_generator(s, g)) + v(y.size()) * y, 0.0;
      return out;
    };
    result = krylov_expmv(apply_aug, aug, t).head(y.size());
  }

  CovarianceMatrix out{s.statistics, unvec_rm(result, d, d)};
  project_symmetry(s.statistics, out.gamma);
  return out;
}

/// Adaptive RK5(4) integration of the matrix equation of motion, sampled at
/// the given times. t_grid must be strictly increasing and start at >= 0;
/// gamma0 is the state at t = 0.
inline std::vector<CovarianceMatrix> evolve_integrate(const StructureSet& s,
                                                      const CovarianceMatrix& gamma0,
                                                      const std::vector<double>& t_grid,
                                                      const OdeOptions& opt = {.rtol = 1e-10}) {
  if (gamma0.statistics != s.statistics)
    throw ValidationError("evolve_integrate: statistics mismatch");
  validate_covariance(gamma0);
  const int d = s.dim();
  if (gamma0.dim() != d) throw ValidationError("evolve_integrate: dimension mismatch");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw ValidationError("evolve_integrate: t_grid must be strictly increasing and >= 0");
  }

  auto deriv = [&](double, const VectorXd& v) {
    return vec_rm(eom_rhs(s, unvec_rm(v, d, d)));
  };

  std::vector<CovarianceMatrix> out;
  out.reserve(t_grid.size());
  VectorXd state = vec_rm(gamma0.gamma);
  double t = 0.0;
  for (double target : t_grid) {
    state = rk45_integrate(deriv, state, t, target, opt);
    t = target;
    CovarianceMatrix g{s.statistics, unvec_rm(state, d, d)};
    project_symmetry(s.statistics, g.gamma);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace lq
