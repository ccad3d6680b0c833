#pragma once

#include <cstdint>
#include <string>

#include "skewls/circuit.hpp"

namespace skewls {

constexpr int kMaxStateWidth = 24;
constexpr int kMaxUnitaryWidth = 12;

// Amplitude index bit q is qubit q (qubit 0 is the lowest bit).
struct StateVector {
  int width = 0;
  Vector amplitudes;

  static StateVector zeros(int width);
  static StateVector basis(int width, std::uint64_t index);
  static StateVector from_amplitudes(const Vector& amps);
};

struct ShotResult {
  std::uint64_t zeros = 0;
  std::uint64_t ones = 0;
  std::uint64_t seed = 0;
};

void apply_gate(const Gate& g, Vector& amps);
StateVector apply(const Circuit& c, const StateVector& s);
Matrix unitary_of(const Circuit& c);
// <0...0| U(c) |0...0>
cplx overlap_amplitude(const Circuit& c);
// Pr(qubit 0 reads 0)
double probability_first_qubit_zero(const StateVector& s);
ShotResult sample_first_qubit(const StateVector& s, std::uint64_t shots, std::uint64_t seed);

// Child seed for a named estimation task.
std::uint64_t derive_seed(std::uint64_t master, const std::string& label);

}  // namespace skewls
