#include "qrlab/io.hpp"
#include "qrlab/random.hpp"
#include "qrlab/suite.hpp"

#include <doctest.h>
#include <json.hpp>

#include <stdexcept>

using namespace qrlab;

namespace {

KeyedEnsemble sample_ensemble() {
  Rng rng(19);
  std::vector<DensityMatrix> states{random_density_matrix(rng, 4),
                                    random_density_matrix(rng, 4, 1)};
  return KeyedEnsemble(1, {0, 1}, std::move(states), 2, 2);
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("ensemble json round-trip is bit-identical") {
  KeyedEnsemble e = sample_ensemble();
  std::string text = ensemble_to_json_text(e);
  KeyedEnsemble back = ensemble_from_json_text(text);
  REQUIRE(back.size() == e.size());
  CHECK(back.key_len == e.key_len);
  CHECK(back.dim_a == e.dim_a);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(back.keys[i] == e.keys[i]);
    // Bit-identical matrices, not merely close.
    CHECK((back.states[i].mat().array() == e.states[i].mat().array()).all());
  }
  // Round-tripping the serialized text is byte-stable too.
  CHECK(ensemble_to_json_text(back) == text);
}

TEST_CASE("ensemble load rejects invariant violations with a diagnostic") {
  KeyedEnsemble e = sample_ensemble();
  std::string text = ensemble_to_json_text(e);
  // Corrupt the trace: scale the first diagonal entry.
  nlohmann::json doc = nlohmann::json::parse(text);
  doc["states"]["0"][0][0] = doc["states"]["0"][0][0].get<double>() - 0.02;
  CHECK_THROWS_WITH_AS(ensemble_from_json_text(doc.dump()),
                       doctest::Contains("trace"), std::runtime_error);

  nlohmann::json bad_key = nlohmann::json::parse(text);
  bad_key["states"]["01"] = bad_key["states"]["0"];
  CHECK_THROWS_AS(ensemble_from_json_text(bad_key.dump()), std::runtime_error);

  CHECK_THROWS_AS(ensemble_from_json_text("{"), std::runtime_error);
}

TEST_CASE("circuit json round-trip") {
  LoccCircuit proto(1, 1, 1, 0, 1, {{}}, {{}});
  std::vector<Gate> a{Gate{GateKind::H, {}, {proto.a_qubit(0)}},
                      Gate{GateKind::CNOT, {proto.a_qubit(0)}, {proto.c_qubit(0)}}};
  std::vector<Gate> b{Gate{GateKind::CNOT, {proto.c_qubit(0)}, {proto.b_qubit(0)}}};
  LoccCircuit circuit(1, 1, 1, 0, 1, {a}, {b}, 32);
  std::string text = circuit_to_json_text(circuit);
  LoccCircuit back = circuit_from_json_text(text);
  CHECK(back.n_a() == 1);
  CHECK(back.t_a() == 1);
  CHECK(back.c_bits() == 1);
  CHECK(back.gate_budget() == 32);
  CHECK(back.gate_count() == 3);
  CHECK(circuit_to_json_text(back) == text);
}

TEST_CASE("key bitstring helpers") {
  CHECK(key_to_bits(5, 4) == "0101");
  CHECK(bits_to_key("0101") == 5);
  CHECK(key_to_bits(0, 0) == "");
  CHECK(bits_to_key("") == 0);
  CHECK_THROWS_AS(bits_to_key("012"), std::runtime_error);
}

TEST_CASE("zero-length-key ensembles round-trip") {
  KeyedEnsemble single(0, {0}, {DensityMatrix::maximally_mixed(2)}, 2, 1);
  KeyedEnsemble back = ensemble_from_json_text(ensemble_to_json_text(single));
  CHECK(back.size() == 1);
  CHECK(back.key_len == 0);
}

TEST_CASE("report serialization and counters") {
  Report rep;
  rep.seed = 7;
  CheckRecord a;
  a.name = "alpha";
  a.ref = "bounds.fannes_bound";
  a.lhs = 0.0;
  a.rhs = 1.0;
  a.status = CheckStatus::pass;
  a.runtime_ms = 12.5;
  CheckRecord b = a;
  b.name = "beta";
  b.status = CheckStatus::indeterminate;
  rep.records = {a, b};
  CHECK(rep.passed() == 1);
  CHECK(rep.indeterminate() == 1);
  CHECK(rep.failed() == 0);
  CHECK(rep.all_passed());

  std::string with = rep.to_json(true);
  std::string without = rep.to_json(false);
  CHECK(with.find("runtime_ms") != std::string::npos);
  CHECK(without.find("runtime_ms") == std::string::npos);
  CHECK(rep.to_text().find("INDET") != std::string::npos);
}

TEST_CASE("contract registry covers the suite refs") {
  const auto& reg = contract_registry();
  CHECK(reg.count("linalg.trace_distance") == 1);
  CHECK(reg.count("locc.locked_entanglement_demo") == 1);
  CHECK(reg.count("harness.run_suite") == 1);
  CHECK(reg.count("nonexistent.op") == 0);
}

TEST_CASE("tolerance overrides apply") {
  SuiteConfig config;
  CHECK(config.tol("anything", 0.5) == 0.5);
  config.tolerance_overrides["anything"] = 0.125;
  CHECK(config.tol("anything", 0.5) == 0.125);
}

TEST_CASE("empty suite selection yields an empty passing report") {
  SuiteConfig config;
  config.suites = {};
  Report rep = run_suite(config);
  CHECK(rep.records.empty());
  CHECK(rep.all_passed());
  CHECK_THROWS_AS(run_suite([] {
                    SuiteConfig c;
                    c.suites = {"nonsense"};
                    return c;
                  }()),
                  std::invalid_argument);
}

TEST_SUITE_END();
