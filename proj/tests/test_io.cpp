#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewls/errors.hpp"
#include "skewls/io.hpp"
#include "support.hpp"

using namespace skewls;
using namespace testing_support;

TEST_CASE("circuit round trip is byte identical") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const Circuit c = random_circuit(1 + t % 5, 4, rng);
    const std::string text = dump_json(circuit_to_json(c));
    const Circuit back = circuit_from_json(parse_json(text));
    CHECK(back == c);
    CHECK(dump_json(circuit_to_json(back)) == text);
  }
  const std::string h = dump_json(circuit_to_json(Circuit::from_gates(1, {gate_h(0)})));
  CHECK(h.find("\"params\": []") != std::string::npos);
}

TEST_CASE("circuit parse diagnostics") {
  auto message = [](const std::string& text) {
    try {
      circuit_from_json(parse_json(text, "c.json"));
    } catch (const ContractError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{\"width\": 1,\n \"layers\": [}") == "c.json:2:13: malformed JSON");
  CHECK(message(R"({"layers": []})") == "circuit: missing field 'width'");
  CHECK(message(R"({"width": 1, "layers": [[{"kind": "Q", "qubits": [0]}]]})") ==
        "circuit.layers[0][0].kind: unknown gate kind 'Q'");
  CHECK(message(R"({"width": 1, "layers": [[{"kind": "H", "qubits": ["a"]}]]})") ==
        "circuit.layers[0][0].qubits[0]: expected an integer");
  CHECK_FALSE(message(R"({"width": 1, "layers": [[{"kind": "CNOT", "qubits": [0, 1]}]]})").empty());
}

TEST_CASE("graph json") {
  for (const auto& g : {ConnectivityGraph::lattice(2, 3), ConnectivityGraph::complete(4), ConnectivityGraph::path(5),
                        ConnectivityGraph::explicit_edges(3, {{0, 1}, {1, 2}})}) {
    CHECK(graph_from_json(graph_to_json(g)) == g);
  }
  CHECK_THROWS_AS(graph_from_json(parse_json(R"({"variant": "ring", "n": 3})")), ContractError);
  CHECK_THROWS_AS(graph_from_json(parse_json(R"({"variant": "lattice", "l1": 0, "l2": 3})")), ContractError);
}

TEST_CASE("instances") {
  std::mt19937_64 rng(2);
  const Matrix a = random_matrix(4, 2, rng);
  const LinearSystemInstance inst = instance_from_matrix(a, random_vector(4, rng));
  const LinearSystemInstance back = instance_from_json(parse_json(dump_json(instance_to_json(inst))));
  CHECK((reconstruct_columns(back.columns) - a).norm() < 1e-12);
  CHECK(back.rhs_oracle.has_value());

  const LinearSystemInstance raw = instance_from_json(parse_json(R"({"matrix": [[1, 0], [0, [0, 2]], [0, 0]], "rhs": [1, 1]})"));
  CHECK(raw.rhs_vector.has_value());
  CHECK(raw.columns.size() == 2);
  CHECK(raw.columns[1].norm == doctest::Approx(2));
  CHECK_THROWS_AS(instance_from_json(parse_json(R"({"matrix": [[1, 0], [0]], "rhs": [1, 1]})")), ContractError);
  CHECK_THROWS_AS(instance_from_json(parse_json(R"({"columns": [], "rhs": {"both": 1}})")), ContractError);

  const FactorizedInstance f = factorized_from_matrices(random_matrix(4, 2, rng), random_matrix(2, 2, rng), random_vector(4, rng));
  const FactorizedInstance fb = factorized_from_json(parse_json(dump_json(factorized_to_json(f))));
  CHECK((reconstruct_factor_right(fb.right) - reconstruct_factor_right(f.right)).norm() < 1e-12);
}

TEST_CASE("reports") {
  const DepthReport naive = depth_report(Circuit::from_gates(2, {gate_cnot(0, 1)}), Construction::naive());
  const Json j = depth_report_to_json(naive);
  CHECK(j["bound_value"].is_null());
  CHECK(j["metadata"]["ancilla_phase_gate"] == "Sdg");
  CHECK(depth_report_to_json(depth_report(Circuit::from_gates(2, {gate_cnot(0, 1)}), Construction::ancilla(1)))["bound_value"]
            .is_number());

  SolveReport r;
  r.problem = "overdetermined";
  r.coefficients = Vector::Ones(2);
  r.seeds["master"] = 5;
  const Json rj = report_to_json(r);
  CHECK(rj["coefficients"][1][0] == 1.0);
  CHECK(rj["seeds"]["master"] == 5);
}
