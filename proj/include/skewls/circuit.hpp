#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "skewls/numerics.hpp"

namespace skewls {

enum class GateKind { H, S, Sdg, X, R, CNOT, SWAP, Toffoli };
constexpr int kGateKindCount = 8;

const char* gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);
int gate_arity(GateKind k);

using Mat2 = Eigen::Matrix2cd;

// R = e^{i phase} (cos(theta/2) I - i sin(theta/2) n.sigma), n = (nx, ny, nz).
struct RotationParams {
  double theta = 0, nx = 0, ny = 0, nz = 1, phase = 0;
};

Mat2 rotation_matrix(const RotationParams& p);
RotationParams rotation_from_unitary(const Mat2& u);

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  std::vector<double> params;  // R only: theta, nx, ny, nz, phase

  bool operator==(const Gate& o) const = default;
};

Gate gate_h(int q);
Gate gate_s(int q);
Gate gate_sdg(int q);
Gate gate_x(int q);
Gate gate_r(int q, const RotationParams& p);
Gate gate_r(int q, const Mat2& u);
Gate gate_cnot(int control, int target);
Gate gate_swap(int a, int b);
Gate gate_toffoli(int c1, int c2, int target);

// 2x2 matrix of a single-qubit gate.
Mat2 single_qubit_matrix(const Gate& g);
bool is_single_qubit(const Gate& g);
Gate adjoint(const Gate& g);

struct Circuit {
  int width = 0;
  std::vector<std::vector<Gate>> layers;

  Circuit() = default;
  explicit Circuit(int w) : width(w) {}

  // As-soon-as-possible layering of a gate sequence.
  static Circuit from_gates(int width, const std::vector<Gate>& gates);

  std::vector<Gate> gates() const;
  std::size_t gate_count() const;
  bool empty() const { return gate_count() == 0; }
  bool operator==(const Circuit& o) const = default;
};

// Throws ContractError when a gate or layer is malformed.
void validate(const Circuit& c);

Circuit relayer(const Circuit& c);
// first, then second (same width)
Circuit compose(const Circuit& first, const Circuit& second);
// Relabel qubit q of c to map[q] inside a register of the given width.
Circuit embed(const Circuit& c, int width, const std::vector<int>& map);

struct GateCostModel {
  std::array<int, kGateKindCount> cost{1, 1, 1, 1, 1, 1, 1, 8};

  static GateCostModel unit();
  // SWAP counted as its three CNOTs
  static GateCostModel cnot_equivalent();
  int of(GateKind k) const { return cost[static_cast<int>(k)]; }
  void set(GateKind k, int c);
  bool operator==(const GateCostModel& o) const = default;
};

int depth(const Circuit& c, const GateCostModel& cost = GateCostModel{});

enum class GraphVariant { Complete, Lattice, Path, Explicit };

struct ConnectivityGraph {
  GraphVariant variant = GraphVariant::Complete;
  int n = 0;
  int l1 = 0, l2 = 0;
  std::vector<std::pair<int, int>> edges;  // Explicit only

  static ConnectivityGraph complete(int n);
  static ConnectivityGraph lattice(int l1, int l2);
  static ConnectivityGraph path(int n);
  static ConnectivityGraph explicit_edges(int n, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return n; }
  bool adjacent(int a, int b) const;
  std::vector<int> neighbors(int v) const;
  int distance(int a, int b) const;
  int diameter() const;
  void check() const;
  bool operator==(const ConnectivityGraph& o) const = default;
};

// Lattice cells are labelled in snake order: row r runs left to right when r
// is even and right to left when r is odd. Qubit index = label.
int lattice_label(int row, int col, int l1, int l2);
std::pair<int, int> lattice_cell(int label, int l1, int l2);

struct ConnectivityViolation {
  int layer = 0;
  int index = 0;
  Gate gate;
};

std::vector<ConnectivityViolation> validate_connectivity(const Circuit& c, const ConnectivityGraph& g);

// Textbook Toffoli network over {H, T, T^dag, CNOT}.
std::vector<Gate> toffoli_network(int c1, int c2, int target);

// u = e^{i alpha} A X B X C with ABC = I. When u is a scalar (e^{i alpha} I)
// A = B = C = I and no CNOTs are needed.
struct AbcDecomposition {
  bool scalar = false;
  double alpha = 0;
  Mat2 a, b, c;
};
AbcDecomposition abc_decomposition(const Mat2& u);
// diag(1, e^{i alpha})
Mat2 phase_matrix(double alpha);
bool is_identity(const Mat2& u, double tol = 1e-13);

// Controlled-u as C, CNOT, B, CNOT, A on the target and a phase on the control.
std::vector<Gate> controlled_single_qubit(int control, int target, const Mat2& u);

// Width n+1; qubit 0 is the control, data qubit q moves to q+1.
Circuit controlled_naive(const Circuit& c);
Circuit inverse(const Circuit& c);

// Rewrite into {R, CNOT}: single-qubit gates become R, SWAP three CNOTs,
// Toffoli its textbook network.
Circuit lower_to_rotations_and_cnots(const Circuit& c);

Circuit synthesize_state_prep(const Vector& v, int width);

}  // namespace skewls
