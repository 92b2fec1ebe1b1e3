#include <catch2/catch_amalgamated.hpp>

#include "lq/model.hpp"
#include "support.hpp"

using namespace lq;
using namespace lqtest;
using Catch::Approx;

namespace {

const char* kFermionDecayDoc = R"({
  "statistics": "fermion",
  "n_modes": 1,
  "h": [[0, 0], [0, 0]],
  "linear_jumps": [{"re": [0.7071067811865476, 0], "im": [0, -0.7071067811865476]}]
})";

const char* kBosonGainDoc = R"({
  "statistics": "boson",
  "n_modes": 1,
  "h": [[0, 0], [0, 0]],
  "linear_jumps": [{"re": [0.7071067811865476, 0], "im": [0, 0.7071067811865476]}]
})";

}  // namespace

TEST_CASE("parse_model accepts the canonical single-mode documents", "[model]") {
  const ModelSpec decay = parse_model(std::string(kFermionDecayDoc));
  REQUIRE(decay.statistics == Statistics::Fermion);
  REQUIRE(decay.n_modes == 1);
  REQUIRE(decay.linear_jumps.size() == 1);
  REQUIRE(std::abs(decay.linear_jumps[0](0) - Complex{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);

  const ModelSpec gain = parse_model(std::string(kBosonGainDoc));
  REQUIRE(gain.statistics == Statistics::Boson);
  REQUIRE(gain.n_modes == 1);
}

TEST_CASE("parse_model rejects malformed documents", "[model]") {
  SECTION("symmetry violation") {
    const char* doc = R"({"statistics": "fermion", "n_modes": 1, "h": [[0, 1], [1, 0]]})";
    REQUIRE_THROWS_AS(parse_model(std::string(doc)), ValidationError);
  }
  SECTION("unknown statistics tag") {
    REQUIRE_THROWS_AS(parse_model(std::string(R"({"statistics": "anyon", "n_modes": 1})")),
                      ValidationError);
  }
  SECTION("dimension mismatch") {
    const char* doc = R"({"statistics": "boson", "n_modes": 2, "h": [[0, 0], [0, 0]]})";
    REQUIRE_THROWS_AS(parse_model(std::string(doc)), ValidationError);
  }
  SECTION("non-finite entries") {
    nlohmann::json doc = nlohmann::json::parse(kBosonGainDoc);
    doc["h"][0][0] = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(parse_model(doc), ValidationError);
  }
  SECTION("unknown field") {
    nlohmann::json doc = nlohmann::json::parse(kBosonGainDoc);
    doc["quadratc_jumps"] = nlohmann::json::array();
    REQUIRE_THROWS_AS(parse_model(doc), ValidationError);
  }
  SECTION("jump vector length") {
    nlohmann::json doc = nlohmann::json::parse(kBosonGainDoc);
    doc["linear_jumps"][0]["re"] = {1.0};
    REQUIRE_THROWS_AS(parse_model(doc), ValidationError);
  }
}

TEST_CASE("ladder-basis jump vectors convert to the Majorana basis", "[model]") {
  nlohmann::json doc = nlohmann::json::parse(kBosonGainDoc);
  doc["basis"] = "ladder";
  doc["linear_jumps"] = {{{"re", {0.0, 1.0}}, {"im", {0.0, 0.0}}}};  // L = a^dag
  const ModelSpec m = parse_model(doc);
  REQUIRE(std::abs(m.linear_jumps[0](0) - Complex{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
  REQUIRE(std::abs(m.linear_jumps[0](1) - Complex{0.0, 1.0 / std::sqrt(2.0)}) < 1e-15);
}

TEST_CASE("build_jump_matrix on the pumped boson mode", "[model]") {
  const JumpMatrixB b = build_jump_matrix(boson_gain_model());
  MatrixXcd expected(2, 2);
  expected << Complex{0.5, 0.0}, Complex{0.0, -0.5}, Complex{0.0, 0.5}, Complex{0.5, 0.0};
  REQUIRE(max_abs_diff(b.b, expected) < 1e-15);
  REQUIRE(max_abs_diff(b.b_r, (0.5 * MatrixXd::Identity(2, 2)).eval()) < 1e-15);
  MatrixXd bi(2, 2);
  bi << 0.0, -0.5, 0.5, 0.0;
  REQUIRE(max_abs_diff(b.b_i, bi) < 1e-15);
}

TEST_CASE("build_jump_matrix without jumps gives zero", "[model]") {
  ModelSpec m;
  m.statistics = Statistics::Boson;
  m.n_modes = 2;
  m.h = MatrixXd::Zero(4, 4);
  const JumpMatrixB b = build_jump_matrix(m);
  REQUIRE(b.b.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(b.b_r.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(b.b_i.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_jump_matrix on the decaying fermion mode", "[model]") {
  const JumpMatrixB b = build_jump_matrix(fermion_decay_model(1.0));
  MatrixXd bi(2, 2);
  bi << 0.0, 0.5, -0.5, 0.0;
  REQUIRE(max_abs_diff(b.b_i, bi) < 1e-15);
  REQUIRE(max_abs_diff(b.b_r, (0.5 * MatrixXd::Identity(2, 2)).eval()) < 1e-15);
}

TEST_CASE("jump matrix invariants on random models", "[model]") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 1 + trial % 3, 1 + trial % 4, trial % 2);
    const JumpMatrixB b = build_jump_matrix(m);
    REQUIRE(max_abs_diff(b.b, b.b.adjoint().eval()) < 1e-14);
    REQUIRE(max_abs_diff(b.b_r, b.b_r.transpose().eval()) < 1e-14);
    REQUIRE(max_abs_diff(b.b_i, (-b.b_i.transpose()).eval()) < 1e-14);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(b.b, Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("serialize/parse round trip preserves the model", "[model]") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Statistics stats = trial % 2 == 0 ? Statistics::Fermion : Statistics::Boson;
    const ModelSpec m = random_model(rng, stats, 1 + trial % 2, 2, 1);
    const ModelSpec back = parse_model(serialize_model(m));
    REQUIRE(back.statistics == m.statistics);
    REQUIRE(back.n_modes == m.n_modes);
    REQUIRE(max_abs_diff(back.h, m.h) == 0.0);
    REQUIRE(back.linear_jumps.size() == m.linear_jumps.size());
    for (std::size_t r = 0; r < m.linear_jumps.size(); ++r)
      REQUIRE((back.linear_jumps[r] - m.linear_jumps[r]).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.quadratic_jumps.size() == m.quadratic_jumps.size());
    for (std::size_t s = 0; s < m.quadratic_jumps.size(); ++s)
      REQUIRE(max_abs_diff(back.quadratic_jumps[s], m.quadratic_jumps[s]) == 0.0);
  }
}
