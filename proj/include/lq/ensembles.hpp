// ensembles.hpp — seeded random model generators for the validation suites.

#pragma once

#include <string>

#include "lq/common.hpp"
#include "lq/model.hpp"
#include "lq/numeric.hpp"
#include "lq/spectrum.hpp"
#include "lq/structure.hpp"

namespace lq {

inline MatrixXd random_antisymmetric(Rng& rng, int d, double scale = 1.0) {
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  m = (0.5 * scale * (m - m.transpose())).eval();
  return m;
}

inline MatrixXd random_symmetric(Rng& rng, int d, double scale = 1.0) {
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  m = (0.5 * scale * (m + m.transpose())).eval();
  return m;
}

inline VectorXcd random_complex_vector(Rng& rng, int d, double scale = 1.0) {
  VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * rng.cnormal();
  return v;
}

/// Generic random model with the statistics-appropriate symmetry classes.
inline ModelSpec random_model(Rng& rng, Statistics statistics, int n_modes, int n_linear,
                              int n_quadratic, double scale = 1.0) {
  ModelSpec m;
  m.statistics = statistics;
  m.n_modes = n_modes;
  const int d = 2 * n_modes;
  m.h = statistics == Statistics::Fermion ? random_antisymmetric(rng, d, scale)
                                          : random_symmetric(rng, d, scale);
  for (int r = 0; r < n_linear; ++r)
    m.linear_jumps.push_back(random_complex_vector(rng, d, scale));
  for (int s = 0; s < n_quadratic; ++s)
    m.quadratic_jumps.push_back(statistics == Statistics::Fermion
                                    ? random_antisymmetric(rng, d, scale)
                                    : random_symmetric(rng, d, scale));
  validate_model(m);
  return m;
}

/// Random quasi-free model whose X0 is strictly Hurwitz (relaxing). Bosonic
/// candidates are biased towards loss (annihilation-dominant jumps) so the
/// rejection loop terminates quickly; the spectrum is still checked.
inline ModelSpec random_relaxing_quasifree(Rng& rng, Statistics statistics, int n_modes,
                                           double margin = 1e-3, int max_tries = 500) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    ModelSpec m;
    if (statistics == Statistics::Fermion) {
      m = random_model(rng, statistics, n_modes, n_modes + 1, 0);
    } else {
      m.statistics = statistics;
      m.n_modes = n_modes;
      m.h = random_symmetric(rng, 2 * n_modes, 0.5);
      for (int r = 0; r < n_modes; ++r) {
        VectorXcd ladder(2 * n_modes);
        ladder.head(n_modes) = random_complex_vector(rng, n_modes, 1.0);
        ladder.tail(n_modes) = random_complex_vector(rng, n_modes, 0.2);
        m.linear_jumps.push_back(ladder_to_majorana(ladder, n_modes));
      }
      validate_model(m);
    }
    const SingleParticleSpectrum sp = spectrum_X0(build_structure(m));
    double max_re = -std::numeric_limits<double>::infinity();
    for (const Complex& xi : sp.xi) max_re = std::max(max_re, xi.real());
    if (max_re < -margin) return m;
  }
  throw NumericError("random_relaxing_quasifree: no relaxing model found in " +
                     std::to_string(max_tries) + " draws");
}

}  // namespace lq
