// spectrum.hpp — single-particle spectrum of X0, enumeration of the many-body
// Liouvillian spectrum lambda_n = sum_k xi_k n_k, and stability classification.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lq/common.hpp"
#include "lq/covdyn.hpp"
#include "lq/numeric.hpp"
#include "lq/structure.hpp"

namespace lq {

struct SingleParticleSpectrum {
  std::vector<Complex> xi;   // eigenvalues of X0, deterministically ordered
  bool defective = false;    // nontrivial Jordan structure indicated
  double defect_score = 1.0; // reciprocal condition of the eigenvector matrix
};

/// Eigenvalues of X0 via the real Schur route (Eigen's non-symmetric solver),
/// with a defectiveness diagnostic from the eigenvector-matrix conditioning.
/// Jordan chain structure itself is never computed; the many-body spectrum
/// depends only on eigenvalues and multiplicities.
inline SingleParticleSpectrum spectrum_X0(const MatrixXd& x0) {
  SingleParticleSpectrum out;
  if (x0.rows() == 0) return out;
  Eigen::EigenSolver<MatrixXd> es(x0);
  if (es.info() != Eigen::Success)
    throw NumericError("spectrum_X0: eigensolver did not converge");
  out.xi.resize(x0.rows());
  for (Eigen::Index i = 0; i < x0.rows(); ++i) out.xi[i] = es.eigenvalues()(i);
  sort_eigs(out.xi);

  const Eigen::JacobiSVD<MatrixXcd> svd(es.eigenvectors());
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  out.defect_score = smax > 0.0 ? smin / smax : 0.0;
  out.defective = out.defect_score < 1e-8;
  return out;
}

inline SingleParticleSpectrum spectrum_X0(const StructureSet& s) {
  return spectrum_X0(s.x0);
}

enum class Parity { Even, Odd, NotApplicable };

inline std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "na";
  }
}

struct ManyBodyEigenvalue {
  Complex lambda;
  std::vector<int> occupation;
  Parity parity = Parity::NotApplicable;
};

struct ManyBodySpectrum {
  std::vector<ManyBodyEigenvalue> eigenvalues;
  int truncation = 0;  // bosons: max total occupation; fermions: 0 when exhaustive
};

struct EnumerationOptions {
  std::size_t max_entries = 1'000'000;
};

namespace detail {

inline void enumerate_occupations(int slots, int per_slot_max, long long total_max,
                                  std::size_t cap, std::vector<int>& current,
                                  long long used, int slot,
                                  std::vector<std::vector<int>>& out) {
  if (slot == slots) {
    out.push_back(current);
    if (out.size() > cap)
      throw ValidationError("many_body_spectrum: enumeration exceeds the entry cap");
    return;
  }
  const int limit = static_cast<int>(std::min<long long>(per_slot_max, total_max - used));
  for (int occ = 0; occ <= limit; ++occ) {
    current[slot] = occ;
    enumerate_occupations(slots, per_slot_max, total_max, cap, current, used + occ, slot + 1, out);
  }
  current[slot] = 0;
}

}  // namespace detail

/// Enumerates lambda_n = sum_k xi_k n_k. Fermions: n_k in {0,1}, exhaustive
/// for 2n <= 20 (N_max ignored), otherwise limited to total occupation N_max;
/// parity labels attached. Bosons: n_k in N with total occupation <= N_max.
/// Output is deterministically sorted by (Re desc, Im asc, occupation lex).
inline ManyBodySpectrum many_body_spectrum(const SingleParticleSpectrum& sp,
                                           Statistics statistics, int n_max,
                                           const EnumerationOptions& opt = {}) {
  const int slots = static_cast<int>(sp.xi.size());
  ManyBodySpectrum out;

  int per_slot = 1;
  long long total = slots;
  if (statistics == Statistics::Boson) {
    if (slots > 0 && n_max < 1)
      throw ValidationError("many_body_spectrum: bosons need N_max >= 1");
    per_slot = n_max;
    total = n_max;
    out.truncation = n_max;
  } else if (slots > 20) {
    if (n_max < 1)
      throw ValidationError("many_body_spectrum: fermion system too large for exhaustive "
                            "enumeration; give N_max >= 1");
    total = n_max;
    out.truncation = n_max;
  }

  std::vector<std::vector<int>> occupations;
  std::vector<int> current(slots, 0);
  detail::enumerate_occupations(slots, per_slot, total, opt.max_entries, current, 0, 0,
                                occupations);

  out.eigenvalues.reserve(occupations.size());
  for (std::vector<int>& occ : occupations) {
    ManyBodyEigenvalue e;
    e.lambda = Complex{0.0, 0.0};
    long long weight = 0;
    for (int k = 0; k < slots; ++k) {
      if (occ[k] != 0) e.lambda += static_cast<double>(occ[k]) * sp.xi[k];
      weight += occ[k];
    }
    e.parity = statistics == Statistics::Fermion
                   ? (weight % 2 == 0 ? Parity::Even : Parity::Odd)
                   : Parity::NotApplicable;
    e.occupation = std::move(occ);
    out.eigenvalues.push_back(std::move(e));
  }

  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const ManyBodyEigenvalue& a, const ManyBodyEigenvalue& b) {
              if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
              if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
              return a.occupation < b.occupation;
            });
  return out;
}

struct StabilityReport {
  bool stable = false;    // max Re xi <= tol
  bool relaxing = false;  // max Re xi < -tol; implies stable
  std::optional<double> gap;             // -max Re xi, defined when relaxing
  std::optional<double> covariance_gap;  // 2*gap; the decay rate of the
                                         // covariance evolution for quasi-free systems
  int zero_modes = 0;     // xi with |Re| and |Im| below tol
  bool steady_exists = false;
};

/// Stability classification from the single-particle spectrum. For bosons the
/// existence of a many-body steady state additionally requires the solved
/// steady covariance to be physical; fermionic systems always have one.
inline StabilityReport classify(const SingleParticleSpectrum& sp, const SteadyStateResult& steady,
                                Statistics statistics, double tolerance = tol::stability) {
  StabilityReport out;
  double max_re = -std::numeric_limits<double>::infinity();
  for (const Complex& xi : sp.xi) {
    max_re = std::max(max_re, xi.real());
    if (std::abs(xi.real()) <= tolerance && std::abs(xi.imag()) <= tolerance) ++out.zero_modes;
  }
  if (sp.xi.empty()) max_re = 0.0;
  out.stable = max_re <= tolerance;
  out.relaxing = max_re < -tolerance;
  if (out.relaxing) {
    out.gap = -max_re;
    out.covariance_gap = -2.0 * max_re;
  }
  out.steady_exists = statistics == Statistics::Fermion ? true : steady.physical;
  return out;
}

}  // namespace lq
