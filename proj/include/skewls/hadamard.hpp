#pragma once

#include <cstdint>
#include <string>

#include "skewls/simulator.hpp"
#include "skewls/transpiler.hpp"

namespace skewls {

enum class Quadrature { Re, Im };

struct OverlapEstimate {
  cplx value;
  std::uint64_t shots_per_part = 0;  // 0: exact
  double standard_error = 0;
  std::uint64_t seed = 0;
};

// H on the ancilla (qubit 0), controlled-u, S^dag for Im, H. Reading qubit 0
// gives Pr(0) = (1 + Re<0|U|0>)/2 or (1 + Im<0|U|0>)/2.
Circuit build_hadamard_test(const Circuit& u, Quadrature part, const Construction& how = Construction::naive(),
                            const GateCostModel& cost = GateCostModel{});

// Exact Pr(qubit 0 reads 0) of a test circuit started from |0...0>.
double hadamard_probability_zero(const Circuit& test);

// B followed by A^dag, the unitary whose <0|U|0> is the overlap.
Circuit overlap_circuit(const Circuit& a, const Circuit& b);

// <0|A^dag B|0>. shots = 0 gives the exact amplitude; otherwise Re and Im are
// each estimated from `shots` samples as 2 * zeros / shots - 1, with seeds
// derived from (seed, label).
OverlapEstimate estimate_overlap(const Circuit& a, const Circuit& b, std::uint64_t shots, std::uint64_t seed,
                                 const Construction& how = Construction::naive(), const std::string& label = "overlap");

}  // namespace skewls
