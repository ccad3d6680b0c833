#include "skewls/hadamard.hpp"

#include <algorithm>
#include <cmath>

#include "skewls/errors.hpp"

namespace skewls {

Circuit build_hadamard_test(const Circuit& u, Quadrature part, const Construction& how, const GateCostModel& cost) {
  if (how.kind == ConstructionKind::Lattice && (how.l1 < 1 || how.l2 < 1)) {
    throw ContractError("build_hadamard_test: invalid lattice dimensions");
  }
  const Circuit ctrl = controlled(u, how, cost);
  std::vector<Gate> gates{gate_h(0)};
  const auto body = ctrl.gates();
  gates.insert(gates.end(), body.begin(), body.end());
  if (part == Quadrature::Im) gates.push_back(gate_sdg(0));
  gates.push_back(gate_h(0));
  return Circuit::from_gates(ctrl.width, gates);
}

double hadamard_probability_zero(const Circuit& test) {
  return probability_first_qubit_zero(apply(test, StateVector::zeros(test.width)));
}

Circuit overlap_circuit(const Circuit& a, const Circuit& b) {
  if (a.width != b.width) throw ContractError("overlap_circuit: circuit widths differ");
  // gates shared by the tails of both cancel at the seam
  std::vector<Gate> gb = b.gates(), ga = a.gates();
  while (!gb.empty() && !ga.empty() && gb.back() == ga.back()) {
    gb.pop_back();
    ga.pop_back();
  }
  for (auto it = ga.rbegin(); it != ga.rend(); ++it) gb.push_back(adjoint(*it));
  return Circuit::from_gates(a.width, gb);
}

OverlapEstimate estimate_overlap(const Circuit& a, const Circuit& b, std::uint64_t shots, std::uint64_t seed,
                                 const Construction& how, const std::string& label) {
  if (a.width != b.width) throw ContractError("estimate_overlap: circuit widths differ");
  const Circuit u = overlap_circuit(a, b);
  OverlapEstimate est;
  est.seed = seed;
  est.shots_per_part = shots;
  if (shots == 0) {
    est.value = overlap_amplitude(u);
    return est;
  }
  auto part = [&](Quadrature q, const char* tag) {
    const Circuit test = build_hadamard_test(u, q, how);
    const StateVector out = apply(test, StateVector::zeros(test.width));
    const ShotResult r = sample_first_qubit(out, shots, derive_seed(seed, label + "/" + tag));
    return 2.0 * static_cast<double>(r.zeros) / static_cast<double>(shots) - 1.0;
  };
  const double re = part(Quadrature::Re, "re"), im = part(Quadrature::Im, "im");
  est.value = cplx(re, im);
  const double s = static_cast<double>(shots);
  est.standard_error = std::sqrt(std::max(0.0, 1 - re * re) / s + std::max(0.0, 1 - im * im) / s);
  return est;
}

}  // namespace skewls
