#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewls/circuit.hpp"

namespace skewls {

// Depth constants of the lattice constructions, asserted in the tests.
// Largest ratios seen on lattices up to 20x20: routing 1.5, fan-out 11,
// controlled circuit 30.
constexpr int kRouteConstant = 3;     // SWAP layers per (l1 + l2)
constexpr int kFanoutConstant = 12;   // unit-cost layers per (l1 + l2)
constexpr int kLatticeConstant = 40;  // layers per d * (l1 + l2)

int ceil_log2(long long n);

struct PermutationSpec {
  int n = 0;
  std::vector<int> targets;

  static PermutationSpec identity(int n);
  void check() const;
  PermutationSpec inverse() const;
};

struct DepthReport {
  std::string construction;
  int measured_depth = 0;
  std::string bound_formula;
  std::optional<int> bound_value;
  int lower_bound = 0;
  GateCostModel cost_model;
  ConnectivityGraph connectivity;
  std::map<std::string, std::string> metadata;
};

// Fan-out x_i ^= x_0 for i = 1..n-1 with arbitrary target values.
Circuit copy_circuit(int n);
// copy_circuit laid onto (source, targets...) of a width-sized register
Circuit fanout_complete(int source, const std::vector<int>& targets, int width);

Circuit control_one_layer(const Circuit& layer, const GateCostModel& cost = GateCostModel{});
Circuit control_with_ancillas(const Circuit& c, int s, const GateCostModel& cost = GateCostModel{});

PermutationSpec snakelike_labeling(int l1, int l2);
Circuit route_permutation_lattice(const PermutationSpec& p, int l1, int l2);
Circuit map_one_layer_cnots_to_lattice(const Circuit& layer, int l1, int l2);
Circuit fanout_on_lattice(int control, const std::vector<int>& targets, int l1, int l2);
Circuit control_circuit_on_lattice(const Circuit& c, int l1, int l2);
Circuit control_circuit_on_path(const Circuit& c, int n);

int depth_lower_bound(int n, const ConnectivityGraph& g);

enum class ConstructionKind { Naive, Ancilla, Lattice };

struct Construction {
  ConstructionKind kind = ConstructionKind::Naive;
  int ancillas = 1;  // s, Ancilla only
  int l1 = 0, l2 = 0;  // Lattice only

  static Construction naive() { return {}; }
  static Construction ancilla(int s) { return {ConstructionKind::Ancilla, s, 0, 0}; }
  static Construction lattice(int l1, int l2) { return {ConstructionKind::Lattice, 1, l1, l2}; }
  std::string name() const;
};

// Register width of the controlled circuit for a width-n unitary.
int controlled_width(int n, const Construction& how);
// Controlled-U(u) with the control on qubit 0 and data starting at qubit
// controlled_width - n for the ancilla layout, or at qubit 1 otherwise.
Circuit controlled(const Circuit& u, const Construction& how, const GateCostModel& cost = GateCostModel{});
int data_offset(int n, const Construction& how);

// Depth floor of a Hadamard test on u: max(ceil(log2 k), reach) where k is
// the number of data qubits u acts on and reach is the graph distance from the
// control to the farthest of them. Equals depth_lower_bound for full support.
int hadamard_depth_floor(const Circuit& u, const Construction& how);

DepthReport depth_report(const Circuit& u, const Construction& how,
                         const GateCostModel& cost = GateCostModel{});

}  // namespace skewls
