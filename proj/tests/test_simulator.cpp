#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewls/errors.hpp"
#include "support.hpp"

using namespace skewls;
using namespace testing_support;

TEST_CASE("apply basics") {
  const StateVector s = StateVector::basis(3, 5);
  CHECK(apply(Circuit(3), s).amplitudes == s.amplitudes);
  const StateVector h = apply(Circuit::from_gates(1, {gate_h(0)}), StateVector::zeros(1));
  CHECK(std::abs(h.amplitudes[0] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(h.amplitudes[1] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(apply(Circuit(2), s), ContractError);
}

TEST_CASE("apply agrees with the dense unitary and keeps the norm") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Circuit c = random_circuit(5, 6, rng);
    Vector v = random_vector(32, rng);
    v /= v.norm();
    const StateVector out = apply(c, StateVector::from_amplitudes(v));
    CHECK((out.amplitudes - reference_unitary(c) * v).norm() < 1e-10);
    CHECK(std::abs(out.amplitudes.norm() - 1) < 1e-8);
  }
  const Circuit deep = random_circuit(4, 100, rng);
  CHECK(std::abs(apply(deep, StateVector::zeros(4)).amplitudes.norm() - 1) < 1e-8);
}

TEST_CASE("unitary extraction") {
  CHECK(unitary_of(Circuit(1)).isApprox(Matrix::Identity(2, 2)));
  Matrix cx = Matrix::Zero(4, 4);
  cx(0, 0) = cx(3, 1) = cx(2, 2) = cx(1, 3) = 1;  // control is qubit 0 (low bit)
  CHECK(unitary_of(Circuit::from_gates(2, {gate_cnot(0, 1)})) == cx);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const Circuit a = random_circuit(4, 3, rng), b = random_circuit(4, 3, rng);
    CHECK((unitary_of(compose(a, inverse(a))) - Matrix::Identity(16, 16)).norm() < 1e-10);
    CHECK((unitary_of(compose(a, b)) - unitary_of(b) * unitary_of(a)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(unitary_of(Circuit(13)), ResourceError);
  CHECK_THROWS_AS(StateVector::zeros(25), ResourceError);
}

TEST_CASE("overlap amplitude") {
  CHECK(overlap_amplitude(Circuit(2)) == cplx(1));
  CHECK(std::abs(overlap_amplitude(Circuit::from_gates(1, {gate_h(0)})) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(overlap_amplitude(Circuit::from_gates(1, {gate_x(0)}))) < 1e-15);
}

TEST_CASE("first-qubit sampling") {
  Vector psi = Vector::Zero(4);
  psi[0] = psi[2] = 1 / std::sqrt(2.0);  // qubit 0 is |0>
  CHECK(sample_first_qubit(StateVector::from_amplitudes(psi), 1000, 1).zeros == 1000);
  Vector one = Vector::Zero(4);
  one[1] = 1;
  CHECK(sample_first_qubit(StateVector::from_amplitudes(one), 1000, 1).zeros == 0);

  const StateVector plus = apply(Circuit::from_gates(1, {gate_h(0)}), StateVector::zeros(1));
  const auto a = sample_first_qubit(plus, 100000, 77), b = sample_first_qubit(plus, 100000, 77);
  CHECK(a.zeros == b.zeros);
  CHECK(a.zeros + a.ones == 100000);
  // 3 sigma of a Binomial(1e5, 1/2) frequency is ~0.0047.
  double mean = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) mean += sample_first_qubit(plus, 100000, seed).zeros / 1e5;
  CHECK(std::abs(mean / 20 - 0.5) < 0.01);
  CHECK_THROWS_AS(sample_first_qubit(plus, 0, 1), ContractError);
}

TEST_CASE("derived seeds") {
  CHECK(derive_seed(1, "re/0/1") == derive_seed(1, "re/0/1"));
  CHECK(derive_seed(1, "re/0/1") != derive_seed(1, "im/0/1"));
  CHECK(derive_seed(1, "re/0/1") != derive_seed(2, "re/0/1"));
}
