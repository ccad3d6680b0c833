#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewls/errors.hpp"
#include "support.hpp"

using namespace skewls;
using namespace testing_support;

TEST_CASE("rotation parameters round trip") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Mat2 u = random_mat2(rng);
    const Mat2 back = rotation_matrix(rotation_from_unitary(u));
    CHECK((back - u).norm() < 1e-12);
    CHECK((back.adjoint() * back - Mat2::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("depth") {
  CHECK(depth(Circuit(3)) == 0);
  CHECK(depth(Circuit::from_gates(5, {gate_cnot(1, 2), gate_cnot(3, 4)}), GateCostModel::unit()) == 1);
  CHECK(depth(Circuit::from_gates(4, {gate_cnot(1, 2), gate_cnot(2, 3)}), GateCostModel::unit()) == 2);
  CHECK(depth(Circuit::from_gates(3, {gate_toffoli(0, 1, 2), gate_h(0)})) == 9);
  CHECK(depth(Circuit::from_gates(2, {gate_swap(0, 1)}), GateCostModel::cnot_equivalent()) == 3);
}

TEST_CASE("depth ignores how a circuit is split into layers") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const Circuit c = random_circuit(5, 4, rng);
    Circuit split(5);
    for (const Gate& g : c.gates()) split.layers.push_back({g});
    CHECK(depth(split) == depth(c));
    CHECK(depth(split, GateCostModel::unit()) == depth(c, GateCostModel::unit()));
  }
}

TEST_CASE("validate rejects malformed circuits") {
  Circuit c(2);
  c.layers = {{gate_cnot(0, 1), gate_h(0)}};
  CHECK_THROWS_AS(validate(c), ContractError);
  c.layers = {{gate_cnot(0, 2)}};
  CHECK_THROWS_AS(validate(c), ContractError);
  c.layers = {{gate_cnot(1, 1)}};
  CHECK_THROWS_AS(validate(c), ContractError);
}

TEST_CASE("connectivity validation") {
  std::mt19937_64 rng(3);
  const Circuit c = random_circuit(4, 3, rng);
  CHECK(validate_connectivity(c, ConnectivityGraph::complete(4)).empty());
  CHECK(validate_connectivity(Circuit::from_gates(3, {gate_cnot(0, 2)}), ConnectivityGraph::path(3)).size() == 1);
  CHECK(validate_connectivity(Circuit::from_gates(4, {gate_cnot(lattice_label(0, 0, 2, 2), lattice_label(0, 1, 2, 2))}),
                              ConnectivityGraph::lattice(2, 2))
            .empty());
  CHECK_THROWS_AS(validate_connectivity(c, ConnectivityGraph::complete(5)), ContractError);
}

TEST_CASE("graph metrics") {
  CHECK(ConnectivityGraph::complete(8).diameter() == 1);
  CHECK(ConnectivityGraph::lattice(4, 4).diameter() == 6);
  CHECK(ConnectivityGraph::path(4).diameter() == 3);
  const auto g = ConnectivityGraph::lattice(3, 4);
  for (int a = 0; a < 12; ++a) {
    for (int b = 0; b < 12; ++b) {
      const auto [ra, ca] = lattice_cell(a, 3, 4);
      const auto [rb, cb] = lattice_cell(b, 3, 4);
      CHECK(g.distance(a, b) == std::abs(ra - rb) + std::abs(ca - cb));
    }
  }
}

TEST_CASE("controlled naive") {
  CHECK(controlled_naive(Circuit::from_gates(1, {gate_x(0)})).gates() == std::vector<Gate>{gate_cnot(0, 1)});
  CHECK(controlled_naive(Circuit::from_gates(2, {gate_cnot(0, 1)})).gates() == std::vector<Gate>{gate_toffoli(0, 1, 2)});
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 10; ++t) {
      const Circuit c = random_circuit(n, 2, rng);
      CHECK(controlled_error(c, controlled_naive(c), 0, 1) < 1e-10);
    }
  }
}

TEST_CASE("inverse and relayer") {
  CHECK(inverse(Circuit::from_gates(1, {gate_h(0)})).gates() == std::vector<Gate>{gate_h(0)});
  CHECK(inverse(Circuit::from_gates(1, {gate_s(0)})).gates() == std::vector<Gate>{gate_sdg(0)});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const Circuit c = random_circuit(5, 4, rng);
    const Matrix u = reference_unitary(c);
    CHECK((reference_unitary(inverse(c)) * u - Matrix::Identity(32, 32)).norm() < 1e-10);
    CHECK((reference_unitary(relayer(c)) - u).norm() < 1e-10);
    CHECK((reference_unitary(lower_to_rotations_and_cnots(c)) - u).norm() < 1e-10);
  }
}

TEST_CASE("toffoli network and controlled single-qubit gates") {
  CHECK((reference_unitary(Circuit::from_gates(3, toffoli_network(0, 1, 2))) -
         reference_unitary(Circuit::from_gates(3, {gate_toffoli(0, 1, 2)})))
            .norm() < 1e-12);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const Mat2 u = random_mat2(rng);
    const Circuit one = Circuit::from_gates(1, {gate_r(0, u)});
    CHECK(controlled_error(one, Circuit::from_gates(2, controlled_single_qubit(0, 1, u)), 0, 1) < 1e-10);
    const auto d = abc_decomposition(u);
    const Mat2 x = (Mat2() << 0, 1, 1, 0).finished();
    CHECK((d.a * d.b * d.c - Mat2::Identity()).norm() < 1e-10);
    CHECK((std::exp(cplx(0, d.alpha)) * d.a * x * d.b * x * d.c - u).norm() < 1e-10);
  }
  const Mat2 scalar = std::exp(cplx(0, 0.3)) * Mat2::Identity();
  CHECK(abc_decomposition(scalar).scalar);
}

TEST_CASE("state preparation") {
  Vector e0 = Vector::Zero(8);
  e0[0] = 1;
  CHECK(synthesize_state_prep(e0, 3).empty());

  Vector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Circuit h = synthesize_state_prep(plus, 1);
  CHECK(h.gate_count() == 1);
  CHECK(h.gates()[0].kind == GateKind::R);

  std::mt19937_64 rng(7);
  for (int width = 1; width <= 5; ++width) {
    for (int t = 0; t < 10; ++t) {
      Vector v = random_vector(1 << width, rng);
      v /= v.norm();
      const Circuit c = synthesize_state_prep(v, width);
      CHECK((reference_unitary(c).col(0) - v).norm() < 1e-8);
    }
  }
  CHECK_THROWS_AS(synthesize_state_prep(Vector::Ones(4), 2), ContractError);
}

TEST_CASE("embed and compose") {
  const Circuit c = Circuit::from_gates(2, {gate_cnot(0, 1)});
  const Circuit e = embed(c, 4, {3, 1});
  CHECK(e.gates() == std::vector<Gate>{gate_cnot(3, 1)});
  const Circuit both = compose(Circuit::from_gates(2, {gate_h(0)}), c);
  CHECK(both.gates() == std::vector<Gate>{gate_h(0), gate_cnot(0, 1)});
}
