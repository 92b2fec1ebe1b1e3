// model.hpp — validated descriptions of quadratic open-system models and the
// Hermitian jump matrix B built from the linear Lindblad coefficients.
//
// Conventions (Majorana basis, index layout of common.hpp):
//   fermion: {w_i, w_j} = delta_ij; Hamiltonian coefficient matrix H = i*h
//            with h real antisymmetric; quadratic jumps M_s = i*m_s likewise.
//   boson:   [w_a, w_b] = tau_ab; H = h real symmetric; M_s = m_s symmetric.
// Linear jumps are complex coefficient vectors on the 2n Majorana operators.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lq/common.hpp"

namespace lq {

struct ModelSpec {
  Statistics statistics = Statistics::Fermion;
  int n_modes = 0;
  MatrixXd h;                          // real parametrization of the Hamiltonian
  std::vector<VectorXcd> linear_jumps; // L_r, length 2n each
  std::vector<MatrixXd> quadratic_jumps;  // m_s, real 2n x 2n

  int dim() const { return 2 * n_modes; }
  bool quasi_free() const { return quadratic_jumps.empty(); }
};

struct JumpMatrixB {
  MatrixXcd b;   // B = sum_r L_r L_r^dag, Hermitian PSD
  MatrixXd b_r;  // (B + B*)/2, symmetric
  MatrixXd b_i;  // (B - B*)/2i, antisymmetric
};

namespace detail {

inline void require_finite(const MatrixXd& m, const std::string& what) {
  if (!m.allFinite()) throw ValidationError(what + ": non-finite entries");
}

inline void require_symmetry(Statistics s, const MatrixXd& m, const std::string& what) {
  const double defect = s == Statistics::Fermion
                            ? (m + m.transpose()).cwiseAbs().maxCoeff()
                            : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol::symmetry)
    throw ValidationError(what + ": " +
                          (s == Statistics::Fermion ? "antisymmetry" : "symmetry") +
                          " violated by " + std::to_string(defect));
}

}  // namespace detail

/// Checks all structural invariants of a model; throws ValidationError.
inline void validate_model(const ModelSpec& m) {
  if (m.n_modes <= 0) throw ValidationError("model: n_modes must be positive");
  const int d = m.dim();
  if (m.h.rows() != d || m.h.cols() != d)
    throw ValidationError("model: h must be 2n x 2n");
  detail::require_finite(m.h, "model.h");
  detail::require_symmetry(m.statistics, m.h, "model.h");
  for (std::size_t r = 0; r < m.linear_jumps.size(); ++r) {
    if (m.linear_jumps[r].size() != d)
      throw ValidationError("model: linear jump " + std::to_string(r) + " has wrong length");
    if (!m.linear_jumps[r].allFinite())
      throw ValidationError("model: linear jump " + std::to_string(r) + " has non-finite entries");
  }
  for (std::size_t s = 0; s < m.quadratic_jumps.size(); ++s) {
    const MatrixXd& q = m.quadratic_jumps[s];
    if (q.rows() != d || q.cols() != d)
      throw ValidationError("model: quadratic jump " + std::to_string(s) + " must be 2n x 2n");
    detail::require_finite(q, "model.quadratic_jumps");
    detail::require_symmetry(m.statistics, q, "model.quadratic_jumps[" + std::to_string(s) + "]");
  }
}

/// Converts a jump vector given on the ladder basis (a_1..a_n, a'_1..a'_n)
/// to Majorana coefficients: a_j = (w_{j+} - i w_{j-})/sqrt2 and
/// a'_j = (w_{j+} + i w_{j-})/sqrt2.
inline VectorXcd ladder_to_majorana(const VectorXcd& ladder, int n_modes) {
  if (ladder.size() != 2 * n_modes)
    throw ValidationError("ladder jump vector has wrong length");
  VectorXcd w(2 * n_modes);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n_modes; ++j) {
    const Complex u = ladder(j);            // coefficient of a_j
    const Complex v = ladder(n_modes + j);  // coefficient of a_j^dag
    w(j) = (u + v) * inv_sqrt2;
    w(n_modes + j) = kI * (v - u) * inv_sqrt2;
  }
  return w;
}

/// B = sum_r L_r L_r^dag with its real/imaginary parts; verifies Hermiticity
/// and positive semi-definiteness.
inline JumpMatrixB build_jump_matrix(const ModelSpec& model) {
  const int d = model.dim();
  JumpMatrixB out;
  out.b = MatrixXcd::Zero(d, d);
  for (const VectorXcd& jump : model.linear_jumps) out.b += jump * jump.adjoint();

  const MatrixXcd sym = 0.5 * (out.b + out.b.conjugate());
  const MatrixXcd antisym = (out.b - out.b.conjugate()) / (2.0 * kI);
  if (sym.imag().cwiseAbs().maxCoeff() > tol::realness ||
      antisym.imag().cwiseAbs().maxCoeff() > tol::realness)
    throw NumericError("build_jump_matrix: B_r/B_i not real");
  out.b_r = sym.real();
  out.b_i = antisym.real();

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(out.b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("build_jump_matrix: eigensolver failed");
  if (d > 0 && es.eigenvalues().minCoeff() < -tol::psd)
    throw NumericError("build_jump_matrix: B not positive semi-definite");
  return out;
}

// ---------------------------------------------------------------------------
// JSON document format:
// {
//   "statistics": "fermion" | "boson",
//   "n_modes": int,
//   "h": [[float]],                               (optional, default 0)
//   "linear_jumps": [{"re": [float], "im": [float]}],   (optional)
//   "quadratic_jumps": [[[float]]],               (optional)
//   "basis": "majorana" | "ladder"                (optional, default "majorana")
// }

namespace detail {

inline MatrixXd parse_matrix(const nlohmann::json& j, int d, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ValidationError(what + ": expected " + std::to_string(d) + " rows");
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw ValidationError(what + ": row " + std::to_string(i) + " must have " +
                            std::to_string(d) + " entries");
    for (int k = 0; k < d; ++k) {
      if (!row.at(k).is_number())
        throw ValidationError(what + ": non-numeric entry");
      m(i, k) = row.at(k).get<double>();
    }
  }
  return m;
}

inline nlohmann::json dump_matrix(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

/// Parses and validates a model document; see the schema above.
inline ModelSpec parse_model(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");
  static const std::vector<std::string> known = {
      "statistics", "n_modes", "h", "linear_jumps", "quadratic_jumps", "basis"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ValidationError("model document: unknown field \"" + item.key() + "\"");
  }

  ModelSpec m;
  const std::string stat = doc.value("statistics", std::string{});
  if (stat == "fermion")
    m.statistics = Statistics::Fermion;
  else if (stat == "boson")
    m.statistics = Statistics::Boson;
  else
    throw ValidationError("model document: unknown statistics tag \"" + stat + "\"");

  if (!doc.contains("n_modes") || !doc.at("n_modes").is_number_integer())
    throw ValidationError("model document: n_modes must be an integer");
  m.n_modes = doc.at("n_modes").get<int>();
  if (m.n_modes <= 0) throw ValidationError("model document: n_modes must be positive");
  const int d = m.dim();

  m.h = doc.contains("h") ? detail::parse_matrix(doc.at("h"), d, "model.h")
                          : MatrixXd::Zero(d, d).eval();

  const std::string basis = doc.value("basis", std::string{"majorana"});
  if (basis != "majorana" && basis != "ladder")
    throw ValidationError("model document: basis must be \"majorana\" or \"ladder\"");

  if (doc.contains("linear_jumps")) {
    for (const auto& entry : doc.at("linear_jumps")) {
      if (!entry.is_object() || !entry.contains("re") || !entry.contains("im"))
        throw ValidationError("model document: linear jump needs \"re\" and \"im\" arrays");
      const auto& re = entry.at("re");
      const auto& im = entry.at("im");
      if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d)
        throw ValidationError("model document: linear jump arrays must have length 2n");
      VectorXcd jump(d);
      for (int i = 0; i < d; ++i)
        jump(i) = Complex{re.at(i).get<double>(), im.at(i).get<double>()};
      if (basis == "ladder") jump = ladder_to_majorana(jump, m.n_modes);
      m.linear_jumps.push_back(std::move(jump));
    }
  }
  if (doc.contains("quadratic_jumps")) {
    for (const auto& entry : doc.at("quadratic_jumps"))
      m.quadratic_jumps.push_back(detail::parse_matrix(entry, d, "model.quadratic_jumps"));
  }

  validate_model(m);
  return m;
}

inline ModelSpec parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string{"model document: "} + e.what());
  }
  return parse_model(doc);
}

/// Emits the document form of a model (always on the Majorana basis).
inline nlohmann::json serialize_model(const ModelSpec& m) {
  nlohmann::json doc;
  doc["statistics"] = to_string(m.statistics);
  doc["n_modes"] = m.n_modes;
  doc["h"] = detail::dump_matrix(m.h);
  nlohmann::json jumps = nlohmann::json::array();
  for (const VectorXcd& jump : m.linear_jumps) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < jump.size(); ++i) {
      re.push_back(jump(i).real());
      im.push_back(jump(i).imag());
    }
    jumps.push_back({{"re", re}, {"im", im}});
  }
  doc["linear_jumps"] = jumps;
  nlohmann::json quad = nlohmann::json::array();
  for (const MatrixXd& q : m.quadratic_jumps) quad.push_back(detail::dump_matrix(q));
  doc["quadratic_jumps"] = quad;
  return doc;
}

}  // namespace lq
