#include <catch2/catch_amalgamated.hpp>

#include "lq/oracle.hpp"
#include "lq/spectrum.hpp"
#include "lq/structure.hpp"
#include "support.hpp"

using namespace lq;
using namespace lqtest;
using Catch::Approx;

namespace {

// Complex-arithmetic evaluation of the structure matrices straight from their
// defining expressions, independent of the real-form shortcuts used by
// build_structure. H and M_s are reconstructed as i*h / i*m_s for fermions.
struct ComplexForms {
  MatrixXcd x, y, x0;
  std::vector<MatrixXcd> z;
};

ComplexForms complex_structure(const ModelSpec& m, const JumpMatrixB& b) {
  const int d = m.dim();
  ComplexForms out;
  if (m.statistics == Statistics::Fermion) {
    const MatrixXcd h_c = kI * m.h.cast<Complex>();
    out.x0 = -2.0 * kI * h_c - b.b_r.cast<Complex>();
    out.x = out.x0;
    for (const MatrixXd& mq : m.quadratic_jumps) {
      const MatrixXcd m_c = kI * mq.cast<Complex>();
      out.x -= 2.0 * (m_c * m_c);
      out.z.push_back(std::sqrt(2.0) * kI * m_c);
    }
    out.y = b.b_i.cast<Complex>();
  } else {
    const MatrixXcd tau = tau_matrix(m.n_modes);
    const MatrixXcd h_c = m.h.cast<Complex>();
    out.x0 = -2.0 * kI * tau * h_c + kI * tau * b.b_i.cast<Complex>();
    out.x = out.x0;
    for (const MatrixXd& mq : m.quadratic_jumps) {
      const MatrixXcd tm = tau * mq.cast<Complex>();
      out.x -= 2.0 * (tm * tm);
      out.z.push_back(std::sqrt(2.0) * kI * tm);
    }
    out.y = tau * b.b_r.cast<Complex>() * tau;
  }
  (void)d;
  return out;
}

}  // namespace

TEST_CASE("real-form structure matrices equal the complex definitions", "[structure]") {
  Rng rng(301);
  for (int trial = 0; trial < 40; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 1 + trial % 3, trial % 3, trial % 3);
    const JumpMatrixB b = build_jump_matrix(m);
    const StructureSet s = build_structure(m, b);
    const ComplexForms c = complex_structure(m, b);

    REQUIRE(c.x.imag().cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(c.y.imag().cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(c.x0.imag().cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(max_abs_diff(s.x, c.x.real().eval()) < 1e-12);
    REQUIRE(max_abs_diff(s.y, c.y.real().eval()) < 1e-12);
    REQUIRE(max_abs_diff(s.x0, c.x0.real().eval()) < 1e-12);
    REQUIRE(s.z.size() == c.z.size());
    for (std::size_t k = 0; k < s.z.size(); ++k) {
      REQUIRE(c.z[k].imag().cwiseAbs().maxCoeff() < 1e-12);
      REQUIRE(max_abs_diff(s.z[k], c.z[k].real().eval()) < 1e-12);
    }
  }
}

namespace {

MatrixXcd random_low_rank_state(Rng& rng, long dim, long support) {
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < 3; ++k) {
    VectorXcd v = VectorXcd::Zero(dim);
    for (long i = 0; i < support; ++i) v(i) = rng.cnormal();
    rho += (0.5 + rng.uniform()) * (v * v.adjoint());
  }
  rho /= rho.trace();
  return rho;
}

}  // namespace

// The decisive normalization check: the time derivative of the covariance
// matrix of an arbitrary (generally non-Gaussian) state under the raw
// Fock-space generator must equal X G + G X^T + 2 sum Z G Z^T + Y.
TEST_CASE("covariance derivative matches the Fock-space generator", "[structure]") {
  Rng rng(359);
  for (int trial = 0; trial < 12; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const int n = stats == Statistics::Fermion ? 2 : 1;
    const int cutoff = stats == Statistics::Fermion ? 2 : 24;
    const ModelSpec m = random_model(rng, stats, n, 2, 1, 0.6);
    const FockRep rep = make_fock_rep(stats, n, cutoff);
    const DenseLiouvillian liou = build_dense(rep, m);
    // keep bosonic support well below the cutoff so truncation cannot bite
    const MatrixXcd rho = random_low_rank_state(rng, rep.dim, stats == Statistics::Fermion ? rep.dim : 6);

    const MatrixXcd drho = unvec_rm((liou.matrix * vec_rm(rho)).eval(), rep.dim, rep.dim);
    const CovarianceMatrix dgamma_oracle = covariance_from_rho(rep, drho);

    const StructureSet s = build_structure(m);
    const CovarianceMatrix gamma0 = covariance_from_rho(rep, rho);
    const MatrixXd dgamma_eom = eom_rhs(s, gamma0.gamma);
    REQUIRE(max_abs_diff(dgamma_oracle.gamma, dgamma_eom) < 1e-10);
  }
}

TEST_CASE("pumped boson mode structure matrices", "[structure]") {
  const StructureSet s = build_structure(boson_gain_model());
  REQUIRE(max_abs_diff(s.x0, (0.5 * MatrixXd::Identity(2, 2)).eval()) < 1e-15);
  REQUIRE(max_abs_diff(s.y, (0.5 * MatrixXd::Identity(2, 2)).eval()) < 1e-15);
  REQUIRE(max_abs_diff((s.omega * s.omega).eval(), (-MatrixXd::Identity(2, 2)).eval()) == 0.0);
}

TEST_CASE("decaying fermion mode structure matrices", "[structure]") {
  const StructureSet s = build_structure(fermion_decay_model(1.0));
  REQUIRE(max_abs_diff(s.x, (-0.5 * MatrixXd::Identity(2, 2)).eval()) < 1e-15);
  MatrixXd y(2, 2);
  y << 0.0, 0.5, -0.5, 0.0;
  REQUIRE(max_abs_diff(s.y, y) < 1e-15);
}

TEST_CASE("empty model yields zero structure matrices", "[structure]") {
  ModelSpec m;
  m.statistics = Statistics::Fermion;
  m.n_modes = 2;
  m.h = MatrixXd::Zero(4, 4);
  const StructureSet s = build_structure(m);
  REQUIRE(s.x.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(s.y.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(s.z.empty());
}

TEST_CASE("generator K on reference models", "[structure]") {
  SECTION("pumped boson mode: K = identity") {
    const MatrixXd k = build_generator_K(build_structure(boson_gain_model()));
    REQUIRE(max_abs_diff(k, MatrixXd::Identity(4, 4)) < 1e-15);
  }
  SECTION("decaying fermion mode: K = -identity") {
    const MatrixXd k = build_generator_K(build_structure(fermion_decay_model(1.0)));
    REQUIRE(max_abs_diff(k, (-MatrixXd::Identity(4, 4)).eval()) < 1e-15);
  }
  SECTION("pure quadratic jump with Z = identity: K = 2 identity") {
    StructureSet s;
    s.statistics = Statistics::Fermion;
    s.n_modes = 1;
    s.x = MatrixXd::Zero(2, 2);
    s.y = MatrixXd::Zero(2, 2);
    s.x0 = MatrixXd::Zero(2, 2);
    s.z.push_back(MatrixXd::Identity(2, 2));
    REQUIRE(max_abs_diff(build_generator_K(s), (2.0 * MatrixXd::Identity(4, 4)).eval()) == 0.0);
  }
}

TEST_CASE("generator K refuses to densify above the mode cap", "[structure]") {
  ModelSpec m;
  m.statistics = Statistics::Boson;
  m.n_modes = 3;
  m.h = MatrixXd::Zero(6, 6);
  const StructureSet s = build_structure(m);
  REQUIRE_THROWS_AS(build_generator_K(s, 2), ValidationError);
}

TEST_CASE("dense K agrees with the matrix-free action", "[structure]") {
  Rng rng(317);
  for (int trial = 0; trial < 10; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 2, 2, 1);
    const StructureSet s = build_structure(m);
    const MatrixXd k = build_generator_K(s);
    MatrixXd g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
    project_symmetry(stats, g);
    const VectorXd via_k = k * vec_rm(g);
    const VectorXd via_action = vec_rm(apply_generator(s, g));
    REQUIRE((via_k - via_action).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("generator action preserves the symmetry class", "[structure]") {
  Rng rng(331);
  for (int trial = 0; trial < 30; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 1 + trial % 3, 2, trial % 3);
    const StructureSet s = build_structure(m);
    const int d = s.dim();
    MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
    project_symmetry(stats, g);
    const MatrixXd image = apply_generator(s, g);
    REQUIRE(symmetry_defect(stats, image) < 1e-12 * std::max(1.0, image.norm()));
  }
}

TEST_CASE("fermionic generators never have growing modes", "[structure]") {
  Rng rng(347);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelSpec m = random_model(rng, Statistics::Fermion, 1 + trial % 3,
                                     trial % 4, trial % 3);
    const MatrixXd k = build_generator_K(build_structure(m));
    Eigen::EigenSolver<MatrixXd> es(k, false);
    REQUIRE(es.eigenvalues().real().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("quasi-free K spectrum is the pairwise sum of X0 eigenvalues", "[structure]") {
  Rng rng(353);
  for (int trial = 0; trial < 20; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 1 + trial % 3, 2, 0);
    const StructureSet s = build_structure(m);
    const SingleParticleSpectrum sp = spectrum_X0(s);

    std::vector<Complex> pairwise;
    for (const Complex& a : sp.xi)
      for (const Complex& b : sp.xi) pairwise.push_back(a + b);

    Eigen::EigenSolver<MatrixXd> es(build_generator_K(s), false);
    std::vector<Complex> k_eigs(es.eigenvalues().data(),
                                es.eigenvalues().data() + es.eigenvalues().size());
    REQUIRE(multiset_match_distance(pairwise, k_eigs) < 1e-8);
  }
}
