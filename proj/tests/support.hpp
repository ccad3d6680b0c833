#pragma once

#include <random>

#include "skewls/circuit.hpp"
#include "skewls/simulator.hpp"

namespace testing_support {

using namespace skewls;

inline Mat2 random_mat2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat2 m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat2> qr(m);
  return qr.householderQ();
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

// Gates drawn from every kind; `layers` random layers over `width` qubits.
inline Circuit random_circuit(int width, int layers, std::mt19937_64& rng, bool allow_toffoli = true) {
  std::vector<Gate> gates;
  for (int l = 0; l < layers; ++l) {
    std::vector<int> q(width);
    for (int i = 0; i < width; ++i) q[i] = i;
    std::shuffle(q.begin(), q.end(), rng);
    std::size_t at = 0;
    while (at < q.size()) {
      const int left = static_cast<int>(q.size() - at);
      int pick = static_cast<int>(rng() % 8);
      if (pick == 7 && (!allow_toffoli || left < 3)) pick = 5;
      if ((pick == 5 || pick == 6) && left < 2) pick = 4;
      switch (pick) {
        case 0: gates.push_back(gate_h(q[at++])); break;
        case 1: gates.push_back(gate_s(q[at++])); break;
        case 2: gates.push_back(gate_sdg(q[at++])); break;
        case 3: gates.push_back(gate_x(q[at++])); break;
        case 4: gates.push_back(gate_r(q[at], random_mat2(rng))); ++at; break;
        case 5: gates.push_back(gate_cnot(q[at], q[at + 1])); at += 2; break;
        case 6: gates.push_back(gate_swap(q[at], q[at + 1])); at += 2; break;
        default: gates.push_back(gate_toffoli(q[at], q[at + 1], q[at + 2])); at += 3; break;
      }
    }
  }
  return Circuit::from_gates(width, gates);
}

// Independent dense unitary: each gate as an explicit permutation or
// Kronecker-structured matrix.
inline Matrix reference_unitary(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.width;
  Matrix u = Matrix::Identity(dim, dim);
  for (const Gate& g : c.gates()) {
    Matrix m = Matrix::Zero(dim, dim);
    if (is_single_qubit(g)) {
      const Mat2 s = single_qubit_matrix(g);
      const Eigen::Index bit = Eigen::Index{1} << g.qubits[0];
      for (Eigen::Index col = 0; col < dim; ++col) {
        const int b = (col & bit) ? 1 : 0;
        m(col & ~bit, col) += s(0, b);
        m(col | bit, col) += s(1, b);
      }
    } else {
      for (Eigen::Index col = 0; col < dim; ++col) {
        auto bit = [&](int q) { return (col >> q) & 1; };
        Eigen::Index row = col;
        if (g.kind == GateKind::CNOT && bit(g.qubits[0])) row ^= Eigen::Index{1} << g.qubits[1];
        if (g.kind == GateKind::Toffoli && bit(g.qubits[0]) && bit(g.qubits[1])) row ^= Eigen::Index{1} << g.qubits[2];
        if (g.kind == GateKind::SWAP && bit(g.qubits[0]) != bit(g.qubits[1])) {
          row ^= (Eigen::Index{1} << g.qubits[0]) | (Eigen::Index{1} << g.qubits[1]);
        }
        m(row, col) = 1;
      }
    }
    u = m * u;
  }
  return u;
}

// Max deviation of `ctrl` from controlled-U(u) on inputs whose other qubits
// (not control, not data) start in |0>, which must also end in |0>.
inline double controlled_error(const Circuit& u, const Circuit& ctrl, int control, int offset) {
  const Matrix target = reference_unitary(u);
  const Matrix got = unitary_of(ctrl);
  const Eigen::Index n = u.width;
  double worst = 0;
  for (int cbit = 0; cbit < 2; ++cbit) {
    for (Eigen::Index x = 0; x < (Eigen::Index{1} << n); ++x) {
      const Eigen::Index col = (Eigen::Index(cbit) << control) | (x << offset);
      for (Eigen::Index y = 0; y < (Eigen::Index{1} << n); ++y) {
        const Eigen::Index row = (Eigen::Index(cbit) << control) | (y << offset);
        const cplx want = cbit ? target(y, x) : cplx(x == y ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(got(row, col) - want));
      }
    }
  }
  return worst;
}

}  // namespace testing_support

namespace testing_support {

// Same check as controlled_error on a few random inputs with the control in
// superposition; for registers too wide for dense unitaries.
inline double controlled_state_error(const Circuit& u, const Circuit& ctrl, int control, int offset, std::mt19937_64& rng,
                                     int trials = 3) {
  const std::uint64_t dim = std::uint64_t{1} << u.width;
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    Vector psi = random_vector(static_cast<int>(dim), rng);
    psi /= psi.norm();
    const Vector upsi = apply(u, StateVector::from_amplitudes(psi)).amplitudes;
    Vector in = Vector::Zero(Eigen::Index{1} << ctrl.width), want = in;
    for (std::uint64_t x = 0; x < dim; ++x) {
      const auto base = static_cast<Eigen::Index>(x << offset), on = base | (Eigen::Index{1} << control);
      in[base] = in[on] = psi[static_cast<Eigen::Index>(x)] / std::sqrt(2.0);
      want[base] = psi[static_cast<Eigen::Index>(x)] / std::sqrt(2.0);
      want[on] = upsi[static_cast<Eigen::Index>(x)] / std::sqrt(2.0);
    }
    const Vector got = apply(ctrl, StateVector::from_amplitudes(in)).amplitudes;
    worst = std::max(worst, (got - want).norm());
  }
  return worst;
}

// Classical action of a {CNOT, SWAP, X, Toffoli} circuit on a basis index.
inline std::uint64_t basis_image(const Circuit& c, std::uint64_t x) {
  auto bit = [&](int q) { return (x >> q) & 1; };
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::X: x ^= std::uint64_t{1} << g.qubits[0]; break;
      case GateKind::CNOT:
        if (bit(g.qubits[0])) x ^= std::uint64_t{1} << g.qubits[1];
        break;
      case GateKind::Toffoli:
        if (bit(g.qubits[0]) && bit(g.qubits[1])) x ^= std::uint64_t{1} << g.qubits[2];
        break;
      case GateKind::SWAP:
        if (bit(g.qubits[0]) != bit(g.qubits[1])) x ^= (std::uint64_t{1} << g.qubits[0]) | (std::uint64_t{1} << g.qubits[1]);
        break;
      default: throw std::logic_error("basis_image: non-classical gate");
    }
  }
  return x;
}

}  // namespace testing_support

namespace testing_support {

// One layer of disjoint CNOTs and single-qubit gates.
inline Circuit random_layer(int width, std::mt19937_64& rng) {
  std::vector<int> q(width);
  for (int i = 0; i < width; ++i) q[i] = i;
  std::shuffle(q.begin(), q.end(), rng);
  std::vector<Gate> gates;
  std::size_t at = 0;
  while (at < q.size()) {
    const int pick = static_cast<int>(rng() % 4);
    if (pick == 0 && at + 1 < q.size()) {
      gates.push_back(gate_cnot(q[at], q[at + 1]));
      at += 2;
    } else if (pick == 1) {
      gates.push_back(gate_r(q[at++], random_mat2(rng)));
    } else if (pick == 2) {
      gates.push_back(rng() % 2 ? gate_h(q[at]) : gate_s(q[at]));
      ++at;
    } else {
      ++at;  // idle qubit
    }
  }
  Circuit c(width);
  if (!gates.empty()) c.layers.push_back(gates);
  return c;
}

// Random {R, CNOT} circuit of exactly `layers` layers.
inline Circuit random_rotation_cnot_circuit(int width, int layers, std::mt19937_64& rng) {
  Circuit c(width);
  while (static_cast<int>(c.layers.size()) < layers) {
    Circuit l = random_layer(width, rng);
    if (l.layers.empty()) continue;
    for (Gate& g : l.layers[0]) {
      if (is_single_qubit(g)) g = gate_r(g.qubits[0], single_qubit_matrix(g));
    }
    c.layers.push_back(l.layers[0]);
  }
  return c;
}

}  // namespace testing_support
