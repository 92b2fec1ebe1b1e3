// numeric.hpp — dense-linear-algebra helpers shared across the library:
// row-major vectorization, matrix exponentials, an embedded RK5(4) integrator,
// a Krylov exponential action, and canonical forms of (anti)symmetric matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "lq/common.hpp"

namespace lq {

// ---------------------------------------------------------------------------
// Vectorization. The whole library uses the row-major convention
// vec(G)_{i*cols + j} = G_{i,j}, under which vec(A G B) = (A kron B^T) vec(G).

inline VectorXd vec_rm(const MatrixXd& m) {
  VectorXd v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

inline VectorXcd vec_rm(const MatrixXcd& m) {
  VectorXcd v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

inline MatrixXd unvec_rm(const VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

inline MatrixXcd unvec_rm(const VectorXcd& v, Eigen::Index rows, Eigen::Index cols) {
  MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

template <class A, class B>
auto kron(const A& a, const B& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// ---------------------------------------------------------------------------
// Symmetry-class projection. Returns the discarded residue (Frobenius norm of
// the removed component) so callers can keep the defect on record.

inline double symmetrize(MatrixXd& g) {
  MatrixXd defect = 0.5 * (g - g.transpose()).eval();
  g = 0.5 * (g + g.transpose()).eval();
  return defect.norm();
}

inline double antisymmetrize(MatrixXd& g) {
  MatrixXd defect = 0.5 * (g + g.transpose()).eval();
  g = 0.5 * (g - g.transpose()).eval();
  return defect.norm();
}

/// Project onto the symmetry class of the given statistics
/// (fermion: antisymmetric, boson: symmetric); returns the residue.
inline double project_symmetry(Statistics s, MatrixXd& g) {
  return s == Statistics::Fermion ? antisymmetrize(g) : symmetrize(g);
}

inline double symmetry_defect(Statistics s, const MatrixXd& g) {
  MatrixXd tmp = g;
  return project_symmetry(s, tmp);
}

inline double spectral_norm(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(m).singularValues()(0);
}

// ---------------------------------------------------------------------------
// Deterministic eigenvalue ordering: non-increasing real part, ties broken by
// increasing imaginary part.

inline bool eig_before(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() < b.imag();
}

inline void sort_eigs(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), &eig_before);
}

/// Greedy nearest-neighbour matching of two equal-size eigenvalue multisets;
/// returns the largest matched distance. Quadratic cost, fine for the dense
/// sizes handled here.
inline double multiset_match_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size())
    throw ValidationError("multiset_match_distance: size mismatch");
  sort_eigs(a);
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const Complex& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reproducible random numbers. mt19937_64 plus an explicit Box-Muller keeps
// streams identical across standard libraries (std::normal_distribution is
// not pinned by the standard).

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do {
      u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex cnormal() { return Complex{normal(), normal()} / std::sqrt(2.0); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Embedded Dormand-Prince RK5(4) with adaptive step control.

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  double initial_step = 0.0;  // 0: chosen from the first derivative
  double max_step = std::numeric_limits<double>::infinity();
};

namespace detail {

template <class Vec>
double ode_error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double e = std::abs(err(i)) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / std::max<Eigen::Index>(1, err.size()));
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t1 (t1 >= t0). f returns the derivative.
template <class Vec, class F>
Vec rk45_integrate(F&& f, Vec y, double t0, double t1, const OdeOptions& opt = {}) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  if (t1 < t0) throw ValidationError("rk45_integrate: t1 < t0");
  if (t1 == t0) return y;

  double t = t0;
  Vec k1 = f(t, y);
  double h = opt.initial_step;
  if (h <= 0.0) {
    const double ynorm = y.norm() + opt.atol;
    const double dnorm = k1.norm() + opt.atol;
    h = std::min(0.1 * ynorm / dnorm, t1 - t0);
    if (!(h > 0.0) || !std::isfinite(h)) h = (t1 - t0) * 1e-6;
  }
  h = std::min(h, opt.max_step);

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < 1e-15 * std::max(1.0, std::abs(t)))
      throw NumericError("rk45_integrate: step size underflow at t = " + std::to_string(t));

    Vec k2 = f(t + a21 * h, (y + h * (a21 * k1)).eval());
    Vec k3 = f(t + 0.3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    Vec k4 = f(t + 0.8 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    Vec k5 = f(t + 8.0 / 9 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    Vec k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = f(t + h, y5);
    Vec err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();

    const double enorm = detail::ode_error_norm(err, y, y5, opt.rtol, opt.atol);
    if (enorm <= 1.0) {
      t += h;
      y = std::move(y5);
      k1 = std::move(k7);  // first-same-as-last
    }
    const double factor = enorm > 0.0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
    h = std::min(h * std::clamp(factor, 0.2, 5.0), opt.max_step);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Matrix exponentials (scaling-and-squaring via Eigen) and a Krylov action
// for the matrix-free regime.

inline MatrixXd expm(const MatrixXd& a) { return a.exp(); }
inline MatrixXcd expm(const MatrixXcd& a) { return a.exp(); }

/// w = e^{tA} v for a matrix-free operator, by restarted Arnoldi with
/// adaptive substepping. Intended for operators too large to densify.
inline VectorXd krylov_expmv(const std::function<VectorXd(const VectorXd&)>& apply_a,
                             VectorXd v, double t, double tolerance = 1e-12,
                             int max_dim = 40) {
  const double beta0 = v.norm();
  if (beta0 == 0.0 || t == 0.0) return v;

  double done = 0.0;
  double tau = t;
  int guard = 0;
  while (done < t) {
    if (++guard > 10000) throw NumericError("krylov_expmv: too many substeps");
    tau = std::min(tau, t - done);
    const double beta = v.norm();
    const int m = max_dim;
    std::vector<VectorXd> basis;
    basis.reserve(m + 1);
    basis.push_back(v / beta);
    MatrixXd h = MatrixXd::Zero(m + 1, m);
    int built = m;
    bool happy = false;
    for (int j = 0; j < m; ++j) {
      VectorXd w = apply_a(basis[j]);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        h(i, j) = basis[i].dot(w);
        w -= h(i, j) * basis[i];
      }
      h(j + 1, j) = w.norm();
      if (h(j + 1, j) < 1e-14) {
        built = j + 1;
        happy = true;
        break;
      }
      basis.push_back(w / h(j + 1, j));
    }

    while (true) {
      MatrixXd hm = h.topLeftCorner(built, built);
      MatrixXd eh = expm((tau * hm).eval());
      double err = happy ? 0.0 : beta * std::abs(h(built, built - 1) * eh(built - 1, 0)) * tau;
      if (err <= tolerance * std::max(1.0, beta) || tau < 1e-14 * std::abs(t)) {
        VectorXd y = VectorXd::Zero(v.size());
        for (int i = 0; i < built; ++i) y += (beta * eh(i, 0)) * basis[i];
        v = y;
        done += tau;
        tau *= 1.5;
        break;
      }
      tau *= 0.5;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Canonical form of a real antisymmetric matrix: an orthogonal Q and pair
// data such that Q^T A Q is block diagonal with 2x2 blocks [[0, g], [-g, 0]].
// Zero modes are paired up (g = 0). Computed from the real Schur form.

struct AntisymCanonical {
  MatrixXd q;                  // orthogonal; columns ordered pairwise
  std::vector<double> gamma;   // signed block value of pair k = columns (2k, 2k+1)
};

inline AntisymCanonical antisym_canonical_form(const MatrixXd& a) {
  const Eigen::Index dim = a.rows();
  if (dim % 2 != 0 || a.cols() != dim)
    throw ValidationError("antisym_canonical_form: need even-dimensional square matrix");
  Eigen::RealSchur<MatrixXd> schur(a);
  if (schur.info() != Eigen::Success)
    throw NumericError("antisym_canonical_form: Schur iteration failed");
  MatrixXd t = schur.matrixT();
  const MatrixXd& u = schur.matrixU();
  // For antisymmetric input the quasi-triangular factor is block diagonal up
  // to roundoff; keep only its antisymmetric part.
  t = (0.5 * (t - t.transpose())).eval();
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());

  std::vector<int> order;
  std::vector<double> gammas;
  std::vector<int> zeros;
  for (Eigen::Index i = 0; i < dim;) {
    if (i + 1 < dim && std::abs(t(i, i + 1)) > 1e-13 * scale) {
      order.push_back(static_cast<int>(i));
      order.push_back(static_cast<int>(i + 1));
      gammas.push_back(t(i, i + 1));
      i += 2;
    } else {
      zeros.push_back(static_cast<int>(i));
      i += 1;
    }
  }
  for (std::size_t z = 0; z + 1 < zeros.size(); z += 2) {
    order.push_back(zeros[z]);
    order.push_back(zeros[z + 1]);
    gammas.push_back(0.0);
  }
  if (zeros.size() % 2 != 0)
    throw NumericError("antisym_canonical_form: unpaired zero column");

  AntisymCanonical out;
  out.q.resize(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) out.q.col(c) = u.col(order[c]);
  out.gamma = std::move(gammas);
  return out;
}

// ---------------------------------------------------------------------------
// Williamson normal form of a symmetric positive-definite matrix:
// V = S diag(nu, nu) S^T with S Omega S^T = Omega (mode layout x..x p..p).

struct WilliamsonForm {
  MatrixXd s;
  VectorXd nu;  // symplectic eigenvalues, one per mode
};

inline WilliamsonForm williamson(const MatrixXd& v) {
  const int n = static_cast<int>(v.rows()) / 2;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(v);
  if (es.info() != Eigen::Success) throw NumericError("williamson: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError("williamson: matrix not positive definite");
  const MatrixXd vh = es.operatorSqrt();
  const MatrixXd om = omega_matrix(n);
  AntisymCanonical canon = antisym_canonical_form((vh * om * vh).eval());

  // Arrange pair columns (x_k, p_k) such that x_k^T A p_k = -nu_k < 0, then
  // stack all x-like columns before the p-like ones.
  MatrixXd qs(2 * n, 2 * n);
  VectorXd nu(n);
  for (int k = 0; k < n; ++k) {
    double g = canon.gamma[k];
    VectorXd cx = canon.q.col(2 * k), cp = canon.q.col(2 * k + 1);
    if (g > 0.0) std::swap(cx, cp), g = -g;
    if (g == 0.0) throw ValidationError("williamson: zero symplectic eigenvalue");
    nu(k) = -g;
    qs.col(k) = cx;
    qs.col(n + k) = cp;
  }
  WilliamsonForm out;
  VectorXd dinv_sqrt(2 * n);
  dinv_sqrt << nu.cwiseSqrt().cwiseInverse(), nu.cwiseSqrt().cwiseInverse();
  out.s = vh * qs * dinv_sqrt.asDiagonal();
  out.nu = nu;
  return out;
}

}  // namespace lq
