// support.hpp — shared fixtures for the test suites: canonical single-mode
// models and small comparison helpers.

#pragma once

#include <cmath>
#include <vector>

#include "lq/common.hpp"
#include "lq/ensembles.hpp"
#include "lq/model.hpp"

namespace lqtest {

using namespace lq;

inline double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const MatrixXcd& a, const MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Single fermionic mode, no Hamiltonian, loss L = sqrt(gamma) a.
inline ModelSpec fermion_decay_model(double gamma_rate = 1.0) {
  ModelSpec m;
  m.statistics = Statistics::Fermion;
  m.n_modes = 1;
  m.h = MatrixXd::Zero(2, 2);
  VectorXcd jump(2);
  jump << Complex{1.0, 0.0}, Complex{0.0, -1.0};
  m.linear_jumps.push_back(std::sqrt(gamma_rate / 2.0) * jump);
  return m;
}

/// Single bosonic mode pumped by L = a^dag; no steady state exists.
inline ModelSpec boson_gain_model() {
  ModelSpec m;
  m.statistics = Statistics::Boson;
  m.n_modes = 1;
  m.h = MatrixXd::Zero(2, 2);
  VectorXcd jump(2);
  jump << Complex{1.0, 0.0}, Complex{0.0, 1.0};
  m.linear_jumps.push_back(jump / std::sqrt(2.0));
  return m;
}

/// Single bosonic mode damped by L = sqrt(gamma) a; relaxes to the vacuum.
inline ModelSpec boson_damped_model(double gamma_rate = 1.0) {
  ModelSpec m;
  m.statistics = Statistics::Boson;
  m.n_modes = 1;
  m.h = MatrixXd::Zero(2, 2);
  VectorXcd jump(2);
  jump << Complex{1.0, 0.0}, Complex{0.0, -1.0};
  m.linear_jumps.push_back(std::sqrt(gamma_rate / 2.0) * jump);
  return m;
}

}  // namespace lqtest
