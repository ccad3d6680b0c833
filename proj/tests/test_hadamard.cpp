#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewls/errors.hpp"
#include "skewls/hadamard.hpp"
#include "support.hpp"

using namespace skewls;
using namespace testing_support;

namespace {

cplx reference_amplitude(const Circuit& u) { return reference_unitary(u)(0, 0); }

}  // namespace

TEST_CASE("test circuit layout") {
  const Circuit u = Circuit::from_gates(1, {gate_x(0)});
  const Circuit re = build_hadamard_test(u, Quadrature::Re);
  CHECK(re.width == 2);
  CHECK(re.layers.front().front() == gate_h(0));
  CHECK(re.layers.back().back() == gate_h(0));
  const auto im = build_hadamard_test(u, Quadrature::Im).gates();
  CHECK(im[im.size() - 2] == gate_sdg(0));
  CHECK_THROWS_AS(build_hadamard_test(u, Quadrature::Re, Construction::lattice(0, 2)), ContractError);
}

TEST_CASE("probability examples") {
  CHECK(hadamard_probability_zero(build_hadamard_test(Circuit(1), Quadrature::Re)) == doctest::Approx(1).epsilon(1e-14));
  const Circuit x = Circuit::from_gates(1, {gate_x(0)});
  CHECK(hadamard_probability_zero(build_hadamard_test(x, Quadrature::Re)) == doctest::Approx(0.5).epsilon(1e-14));
  const Circuit s = Circuit::from_gates(1, {gate_s(0)});
  CHECK(hadamard_probability_zero(build_hadamard_test(s, Quadrature::Im)) == doctest::Approx(0.5).epsilon(1e-14));
  // <0|R|0> with a phase has a nonzero imaginary part; the sign must follow (1 + Im)/2.
  const Circuit r = Circuit::from_gates(1, {gate_r(0, RotationParams{0.7, 0, 1, 0, 0.4})});
  const cplx amp = reference_amplitude(r);
  CHECK(hadamard_probability_zero(build_hadamard_test(r, Quadrature::Im)) ==
        doctest::Approx((1 + amp.imag()) / 2).epsilon(1e-12));
  CHECK(hadamard_probability_zero(build_hadamard_test(r, Quadrature::Re)) ==
        doctest::Approx((1 + amp.real()) / 2).epsilon(1e-12));
}

TEST_CASE("exact overlaps") {
  const Circuit id(1), x = Circuit::from_gates(1, {gate_x(0)});
  CHECK(estimate_overlap(x, x, 0, 1).value == cplx(1, 0));
  const Circuit h = Circuit::from_gates(1, {gate_h(0)});
  CHECK(estimate_overlap(h, h, 0, 1).value == cplx(1, 0));
  CHECK(overlap_circuit(h, h).empty());
  CHECK(std::abs(estimate_overlap(id, x, 0, 1).value) < 1e-15);
  CHECK(estimate_overlap(id, x, 0, 1).standard_error == 0);
  CHECK_THROWS_AS(estimate_overlap(Circuit(1), Circuit(2), 0, 1), ContractError);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const Circuit a = random_circuit(n, 3, rng), b = random_circuit(n, 3, rng);
    const Matrix ua = reference_unitary(a), ub = reference_unitary(b);
    const cplx expected = (ua.adjoint() * ub)(0, 0);
    CHECK(std::abs(estimate_overlap(a, b, 0, 0).value - expected) < 1e-9);
  }
}

TEST_CASE("sampled overlap of H") {
  const Circuit h = Circuit::from_gates(1, {gate_h(0)});
  const auto est = estimate_overlap(Circuit(1), h, 1000000, 42);
  CHECK(std::abs(est.value.real() - 1 / std::sqrt(2.0)) < 0.005);
  CHECK(std::abs(est.value.imag()) < 0.005);
  CHECK(est.shots_per_part == 1000000);
  CHECK(est.standard_error > 0);
  // same seed, same answer; different label, different stream
  CHECK(estimate_overlap(Circuit(1), h, 1000, 42).value == estimate_overlap(Circuit(1), h, 1000, 42).value);
  CHECK(estimate_overlap(Circuit(1), h, 1000, 42, Construction::naive(), "a").value !=
        estimate_overlap(Circuit(1), h, 1000, 42, Construction::naive(), "b").value);
}

TEST_CASE("hoeffding envelope at delta 0.01") {
  std::mt19937_64 rng(11);
  const Circuit a = random_circuit(2, 3, rng), b = random_circuit(2, 3, rng);
  const cplx exact = estimate_overlap(a, b, 0, 0).value;
  const std::uint64_t shots = 2000;
  const double radius = std::sqrt(std::log(2 / 0.01) / (2.0 * shots));
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const cplx v = estimate_overlap(a, b, shots, seed).value;
    // radius is for the mean of the bits; the estimate is 2 * mean - 1
    violations += std::abs(v.real() - exact.real()) > 2 * radius;
    violations += std::abs(v.imag() - exact.imag()) > 2 * radius;
  }
  CHECK(violations <= 4);
}

TEST_CASE("constructions agree on the test probability") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 4;
    const Circuit u = random_circuit(n, 1 + t % 3, rng);
    for (auto part : {Quadrature::Re, Quadrature::Im}) {
      const double p = hadamard_probability_zero(build_hadamard_test(u, part));
      for (int s = 1; s <= n; ++s) {
        CHECK(std::abs(hadamard_probability_zero(build_hadamard_test(u, part, Construction::ancilla(s))) - p) < 1e-8);
      }
      const int l2 = (n + 2) / 2;
      CHECK(std::abs(hadamard_probability_zero(build_hadamard_test(u, part, Construction::lattice(2, l2))) - p) < 1e-8);
    }
  }
}
