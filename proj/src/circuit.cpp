#include "skewls/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include "skewls/errors.hpp"

namespace skewls {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

Mat2 rz(double a) {
  Mat2 m;
  m << std::exp(-kI * (a / 2)), 0, 0, std::exp(kI * (a / 2));
  return m;
}

Mat2 ry(double a) {
  Mat2 m;
  m << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  return m;
}

bool near_identity(const Mat2& u, double tol = 1e-13) {
  return (u - Mat2::Identity()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::X: return "X";
    case GateKind::R: return "R";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::Toffoli: return "Toffoli";
  }
  return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
  for (int i = 0; i < kGateKindCount; ++i) {
    const auto k = static_cast<GateKind>(i);
    if (name == gate_kind_name(k)) return k;
  }
  throw ContractError("unknown gate kind '" + name + "'");
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::SWAP: return 2;
    case GateKind::Toffoli: return 3;
    default: return 1;
  }
}

Mat2 rotation_matrix(const RotationParams& p) {
  double nx = p.nx, ny = p.ny, nz = p.nz;
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm > 0) {
    nx /= norm;
    ny /= norm;
    nz /= norm;
  } else {
    nx = ny = 0;
    nz = 1;
  }
  const double c = std::cos(p.theta / 2), s = std::sin(p.theta / 2);
  Mat2 m;
  m << cplx(c, -s * nz), cplx(-s * ny, -s * nx), cplx(s * ny, -s * nx), cplx(c, s * nz);
  return std::exp(kI * p.phase) * m;
}

RotationParams rotation_from_unitary(const Mat2& u) {
  const double phase = std::arg(u.determinant()) / 2;
  const Mat2 v = std::exp(-kI * phase) * u;
  const double c = 0.5 * (v(0, 0).real() + v(1, 1).real());
  const double snz = 0.5 * (v(1, 1).imag() - v(0, 0).imag());
  const double snx = -0.5 * (v(1, 0).imag() + v(0, 1).imag());
  const double sny = 0.5 * (v(1, 0).real() - v(0, 1).real());
  const double s = std::sqrt(snx * snx + sny * sny + snz * snz);
  RotationParams p;
  p.phase = phase;
  p.theta = 2 * std::atan2(s, c);
  if (s > 1e-300) {
    p.nx = snx / s;
    p.ny = sny / s;
    p.nz = snz / s;
  }
  return p;
}

Gate gate_h(int q) { return {GateKind::H, {q}, {}}; }
Gate gate_s(int q) { return {GateKind::S, {q}, {}}; }
Gate gate_sdg(int q) { return {GateKind::Sdg, {q}, {}}; }
Gate gate_x(int q) { return {GateKind::X, {q}, {}}; }
Gate gate_r(int q, const RotationParams& p) {
  return {GateKind::R, {q}, {p.theta, p.nx, p.ny, p.nz, p.phase}};
}
Gate gate_r(int q, const Mat2& u) { return gate_r(q, rotation_from_unitary(u)); }
Gate gate_cnot(int control, int target) { return {GateKind::CNOT, {control, target}, {}}; }
Gate gate_swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}}; }
Gate gate_toffoli(int c1, int c2, int target) { return {GateKind::Toffoli, {c1, c2, target}, {}}; }

bool is_single_qubit(const Gate& g) { return gate_arity(g.kind) == 1; }

Mat2 single_qubit_matrix(const Gate& g) {
  Mat2 m;
  const double r = 1 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::H: m << r, r, r, -r; return m;
    case GateKind::S: m << 1, 0, 0, kI; return m;
    case GateKind::Sdg: m << 1, 0, 0, -kI; return m;
    case GateKind::X: m << 0, 1, 1, 0; return m;
    case GateKind::R: {
      if (g.params.size() != 5) throw ContractError("R gate needs 5 parameters");
      return rotation_matrix({g.params[0], g.params[1], g.params[2], g.params[3], g.params[4]});
    }
    default: throw ContractError(std::string("not a single-qubit gate: ") + gate_kind_name(g.kind));
  }
}

Gate adjoint(const Gate& g) {
  switch (g.kind) {
    case GateKind::S: return {GateKind::Sdg, g.qubits, {}};
    case GateKind::Sdg: return {GateKind::S, g.qubits, {}};
    case GateKind::R: {
      Gate out = g;
      out.params[0] = -g.params[0];
      out.params[4] = -g.params[4];
      return out;
    }
    default: return g;
  }
}

Circuit Circuit::from_gates(int width, const std::vector<Gate>& gates) {
  Circuit c(width);
  std::vector<int> ready(static_cast<std::size_t>(std::max(width, 0)), 0);
  for (const Gate& g : gates) {
    int start = 0;
    for (int q : g.qubits) {
      if (q < 0 || q >= width) throw ContractError("gate qubit out of range");
      start = std::max(start, ready[q]);
    }
    if (static_cast<int>(c.layers.size()) <= start) c.layers.resize(start + 1);
    c.layers[start].push_back(g);
    for (int q : g.qubits) ready[q] = start + 1;
  }
  return c;
}

std::vector<Gate> Circuit::gates() const {
  std::vector<Gate> out;
  for (const auto& layer : layers) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

std::size_t Circuit::gate_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.size();
  return n;
}

void validate(const Circuit& c) {
  if (c.width < 0) throw ContractError("circuit width must be nonnegative");
  for (std::size_t li = 0; li < c.layers.size(); ++li) {
    std::set<int> used;
    for (const Gate& g : c.layers[li]) {
      const std::string where = " (layer " + std::to_string(li) + ", gate " + gate_kind_name(g.kind) + ")";
      if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) {
        throw ContractError("wrong number of qubits" + where);
      }
      for (int q : g.qubits) {
        if (q < 0 || q >= c.width) throw ContractError("qubit index out of range" + where);
        if (!used.insert(q).second) throw ContractError("qubit used twice in one layer" + where);
      }
      if (g.kind == GateKind::R) {
        if (g.params.size() != 5) throw ContractError("R gate needs 5 parameters" + where);
        for (double p : g.params) {
          if (!std::isfinite(p)) throw ContractError("non-finite R parameter" + where);
        }
        const double n = std::sqrt(g.params[1] * g.params[1] + g.params[2] * g.params[2] +
                                   g.params[3] * g.params[3]);
        if (std::abs(n - 1) > 1e-9) throw ContractError("R axis is not a unit vector" + where);
      } else if (!g.params.empty()) {
        throw ContractError("unexpected parameters" + where);
      }
    }
  }
}

Circuit relayer(const Circuit& c) { return Circuit::from_gates(c.width, c.gates()); }

Circuit compose(const Circuit& first, const Circuit& second) {
  if (first.width != second.width) throw ContractError("compose: width mismatch");
  Circuit out = first;
  out.layers.insert(out.layers.end(), second.layers.begin(), second.layers.end());
  return out;
}

Circuit embed(const Circuit& c, int width, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != c.width) throw ContractError("embed: map size mismatch");
  std::set<int> seen;
  for (int q : map) {
    if (q < 0 || q >= width || !seen.insert(q).second) throw ContractError("embed: invalid map");
  }
  Circuit out(width);
  out.layers = c.layers;
  for (auto& layer : out.layers) {
    for (auto& g : layer) {
      for (int& q : g.qubits) q = map[q];
    }
  }
  return out;
}

GateCostModel GateCostModel::unit() {
  GateCostModel m;
  m.cost.fill(1);
  return m;
}

GateCostModel GateCostModel::cnot_equivalent() {
  GateCostModel m;
  m.set(GateKind::SWAP, 3);
  return m;
}

void GateCostModel::set(GateKind k, int c) {
  if (c < 1) throw ContractError("gate cost must be at least 1");
  cost[static_cast<int>(k)] = c;
}

int depth(const Circuit& c, const GateCostModel& cost) {
  std::vector<int> ready(static_cast<std::size_t>(std::max(c.width, 0)), 0);
  int total = 0;
  for (const auto& layer : c.layers) {
    for (const Gate& g : layer) {
      int start = 0;
      for (int q : g.qubits) start = std::max(start, ready.at(q));
      const int finish = start + cost.of(g.kind);
      for (int q : g.qubits) ready[q] = finish;
      total = std::max(total, finish);
    }
  }
  return total;
}

int lattice_label(int row, int col, int l1, int l2) {
  if (row < 0 || row >= l1 || col < 0 || col >= l2) throw ContractError("lattice cell out of range");
  return row * l2 + (row % 2 == 0 ? col : l2 - 1 - col);
}

std::pair<int, int> lattice_cell(int label, int l1, int l2) {
  if (label < 0 || label >= l1 * l2) throw ContractError("lattice label out of range");
  const int row = label / l2;
  const int off = label % l2;
  return {row, row % 2 == 0 ? off : l2 - 1 - off};
}

ConnectivityGraph ConnectivityGraph::complete(int n) {
  ConnectivityGraph g;
  g.variant = GraphVariant::Complete;
  g.n = n;
  g.check();
  return g;
}

ConnectivityGraph ConnectivityGraph::lattice(int l1, int l2) {
  ConnectivityGraph g;
  g.variant = GraphVariant::Lattice;
  g.l1 = l1;
  g.l2 = l2;
  g.n = l1 * l2;
  g.check();
  return g;
}

ConnectivityGraph ConnectivityGraph::path(int n) {
  ConnectivityGraph g;
  g.variant = GraphVariant::Path;
  g.n = n;
  g.check();
  return g;
}

ConnectivityGraph ConnectivityGraph::explicit_edges(int n, std::vector<std::pair<int, int>> edges) {
  ConnectivityGraph g;
  g.variant = GraphVariant::Explicit;
  g.n = n;
  g.edges = std::move(edges);
  g.check();
  return g;
}

void ConnectivityGraph::check() const {
  if (n < 1) throw ContractError("graph needs at least one vertex");
  if (variant == GraphVariant::Lattice && (l1 < 1 || l2 < 1 || l1 * l2 != n)) {
    throw ContractError("lattice dimensions must be positive with l1*l2 = n");
  }
  if (variant == GraphVariant::Explicit) {
    for (const auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw ContractError("invalid edge in graph");
    }
  }
}

bool ConnectivityGraph::adjacent(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= n || b >= n) return false;
  switch (variant) {
    case GraphVariant::Complete: return true;
    case GraphVariant::Path: return std::abs(a - b) == 1;
    case GraphVariant::Lattice: {
      const auto [r1, c1] = lattice_cell(a, l1, l2);
      const auto [r2, c2] = lattice_cell(b, l1, l2);
      return std::abs(r1 - r2) + std::abs(c1 - c2) == 1;
    }
    case GraphVariant::Explicit:
      for (const auto& [x, y] : edges) {
        if ((x == a && y == b) || (x == b && y == a)) return true;
      }
      return false;
  }
  return false;
}

std::vector<int> ConnectivityGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n; ++u) {
    if (adjacent(v, u)) out.push_back(u);
  }
  return out;
}

int ConnectivityGraph::distance(int a, int b) const {
  if (a < 0 || b < 0 || a >= n || b >= n) throw ContractError("vertex out of range");
  if (a == b) return 0;
  switch (variant) {
    case GraphVariant::Complete: return 1;
    case GraphVariant::Path: return std::abs(a - b);
    case GraphVariant::Lattice: {
      const auto [r1, c1] = lattice_cell(a, l1, l2);
      const auto [r2, c2] = lattice_cell(b, l1, l2);
      return std::abs(r1 - r2) + std::abs(c1 - c2);
    }
    case GraphVariant::Explicit: break;
  }
  std::vector<int> dist(n, -1);
  std::deque<int> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  if (dist[b] < 0) throw ContractError("graph is disconnected");
  return dist[b];
}

int ConnectivityGraph::diameter() const {
  switch (variant) {
    case GraphVariant::Complete: return n > 1 ? 1 : 0;
    case GraphVariant::Path: return n - 1;
    case GraphVariant::Lattice: return l1 + l2 - 2;
    case GraphVariant::Explicit: break;
  }
  int best = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) best = std::max(best, distance(a, b));
  }
  return best;
}

std::vector<ConnectivityViolation> validate_connectivity(const Circuit& c, const ConnectivityGraph& g) {
  if (c.width != g.vertex_count()) throw ContractError("validate_connectivity: width does not match graph");
  std::vector<ConnectivityViolation> out;
  for (std::size_t li = 0; li < c.layers.size(); ++li) {
    for (std::size_t gi = 0; gi < c.layers[li].size(); ++gi) {
      const Gate& gate = c.layers[li][gi];
      bool ok = true;
      for (std::size_t i = 0; i < gate.qubits.size() && ok; ++i) {
        for (std::size_t j = i + 1; j < gate.qubits.size() && ok; ++j) {
          ok = g.adjacent(gate.qubits[i], gate.qubits[j]);
        }
      }
      if (!ok) out.push_back({static_cast<int>(li), static_cast<int>(gi), gate});
    }
  }
  return out;
}

std::vector<Gate> toffoli_network(int c1, int c2, int t) {
  Mat2 tm;
  tm << 1, 0, 0, std::exp(kI * (kPi / 4));
  const Mat2 tdg = tm.adjoint();
  return {gate_h(t),        gate_cnot(c2, t), gate_r(t, tdg), gate_cnot(c1, t), gate_r(t, tm),
          gate_cnot(c2, t), gate_r(t, tdg),   gate_cnot(c1, t), gate_r(c2, tm), gate_r(t, tm),
          gate_h(t),        gate_cnot(c1, c2), gate_r(c1, tm), gate_r(c2, tdg), gate_cnot(c1, c2)};
}

Mat2 phase_matrix(double alpha) {
  Mat2 m;
  m << 1, 0, 0, std::exp(kI * alpha);
  return m;
}

bool is_identity(const Mat2& u, double tol) { return near_identity(u, tol); }

AbcDecomposition abc_decomposition(const Mat2& u) {
  AbcDecomposition d;
  d.a = d.b = d.c = Mat2::Identity();
  if (std::abs(u(0, 1)) < 1e-14 && std::abs(u(1, 0)) < 1e-14 && std::abs(u(0, 0) - u(1, 1)) < 1e-14) {
    d.scalar = true;
    d.alpha = std::arg(u(0, 0));
    return d;
  }
  // u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)
  d.alpha = std::arg(u.determinant()) / 2;
  const Mat2 v = std::exp(-kI * d.alpha) * u;
  const double gamma = 2 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  double beta, delta;
  if (std::abs(v(1, 0)) < 1e-14) {
    beta = delta = -std::arg(v(0, 0));
  } else if (std::abs(v(0, 0)) < 1e-14) {
    beta = std::arg(v(1, 0));
    delta = -beta;
  } else {
    beta = std::arg(v(1, 0)) - std::arg(v(0, 0));
    delta = -std::arg(v(0, 0)) - std::arg(v(1, 0));
  }
  d.a = rz(beta) * ry(gamma / 2);
  d.b = ry(-gamma / 2) * rz(-(delta + beta) / 2);
  d.c = rz((delta - beta) / 2);
  return d;
}

std::vector<Gate> controlled_single_qubit(int control, int target, const Mat2& u) {
  std::vector<Gate> out;
  const AbcDecomposition d = abc_decomposition(u);
  if (!d.scalar) {
    if (!near_identity(d.c)) out.push_back(gate_r(target, d.c));
    out.push_back(gate_cnot(control, target));
    if (!near_identity(d.b)) out.push_back(gate_r(target, d.b));
    out.push_back(gate_cnot(control, target));
    if (!near_identity(d.a)) out.push_back(gate_r(target, d.a));
  }
  const Mat2 ph = phase_matrix(d.alpha);
  if (!near_identity(ph)) out.push_back(gate_r(control, ph));
  return out;
}

Circuit controlled_naive(const Circuit& c) {
  std::vector<Gate> out;
  auto emit = [&out](const Gate& g) {
    switch (g.kind) {
      case GateKind::X: out.push_back(gate_cnot(0, g.qubits[0])); break;
      case GateKind::CNOT: out.push_back(gate_toffoli(0, g.qubits[0], g.qubits[1])); break;
      case GateKind::SWAP:
        out.push_back(gate_cnot(g.qubits[1], g.qubits[0]));
        out.push_back(gate_toffoli(0, g.qubits[0], g.qubits[1]));
        out.push_back(gate_cnot(g.qubits[1], g.qubits[0]));
        break;
      default: {
        const auto part = controlled_single_qubit(0, g.qubits[0], single_qubit_matrix(g));
        out.insert(out.end(), part.begin(), part.end());
      }
    }
  };
  for (Gate g : c.gates()) {
    for (int& q : g.qubits) q += 1;
    if (g.kind == GateKind::Toffoli) {
      for (const Gate& h : toffoli_network(g.qubits[0], g.qubits[1], g.qubits[2])) emit(h);
    } else {
      emit(g);
    }
  }
  return Circuit::from_gates(c.width + 1, out);
}

Circuit inverse(const Circuit& c) {
  Circuit out(c.width);
  for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
    std::vector<Gate> layer;
    for (auto g = it->rbegin(); g != it->rend(); ++g) layer.push_back(adjoint(*g));
    out.layers.push_back(std::move(layer));
  }
  return out;
}

Circuit lower_to_rotations_and_cnots(const Circuit& c) {
  std::vector<Gate> out;
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::CNOT: out.push_back(g); break;
      case GateKind::R: out.push_back(g); break;
      case GateKind::SWAP:
        out.push_back(gate_cnot(g.qubits[0], g.qubits[1]));
        out.push_back(gate_cnot(g.qubits[1], g.qubits[0]));
        out.push_back(gate_cnot(g.qubits[0], g.qubits[1]));
        break;
      case GateKind::Toffoli:
        for (const Gate& h : toffoli_network(g.qubits[0], g.qubits[1], g.qubits[2])) {
          out.push_back(h.kind == GateKind::H ? gate_r(h.qubits[0], single_qubit_matrix(h)) : h);
        }
        break;
      default: out.push_back(gate_r(g.qubits[0], single_qubit_matrix(g))); break;
    }
  }
  return Circuit::from_gates(c.width, out);
}

namespace {

// Uniformly controlled rotation about Y (axis_y) or Z: the target is rotated
// by theta[p] when the controls read p (bit j of p is controls[j]).
void uniformly_controlled_rotation(std::vector<Gate>& out, bool axis_y, int target,
                                   const std::vector<int>& controls, const std::vector<double>& theta) {
  bool trivial = true;
  for (double t : theta) trivial = trivial && std::abs(t) < 1e-14;
  if (trivial) return;
  auto rot = [&](double a) {
    RotationParams p;
    p.theta = a;
    p.nx = 0;
    p.ny = axis_y ? 1 : 0;
    p.nz = axis_y ? 0 : 1;
    return gate_r(target, p);
  };
  const int k = static_cast<int>(controls.size());
  if (k == 0) {
    out.push_back(rot(theta[0]));
    return;
  }
  const int m = 1 << k;
  auto gray = [](int i) { return i ^ (i >> 1); };
  for (int i = 0; i < m; ++i) {
    double alpha = 0;
    for (int x = 0; x < m; ++x) {
      alpha += ((std::popcount(static_cast<unsigned>(x & gray(i))) & 1) ? -theta[x] : theta[x]);
    }
    alpha /= m;
    if (std::abs(alpha) > 1e-14) out.push_back(rot(alpha));
    const int diff = gray(i) ^ gray((i + 1) % m);
    out.push_back(gate_cnot(controls[std::countr_zero(static_cast<unsigned>(diff))], target));
  }
}

}  // namespace

Circuit synthesize_state_prep(const Vector& v, int width) {
  if (width < 0 || width > 30) throw ContractError("synthesize_state_prep: unsupported width");
  const std::size_t dim = std::size_t{1} << width;
  if (static_cast<std::size_t>(v.size()) != dim) throw ContractError("synthesize_state_prep: dimension is not 2^width");
  if (!all_finite(v) || std::abs(v.norm() - 1) > 1e-10) throw ContractError("synthesize_state_prep: vector is not unit norm");

  std::vector<Gate> out;
  std::vector<double> prob(dim);
  for (std::size_t i = 0; i < dim; ++i) prob[i] = std::norm(v[static_cast<Eigen::Index>(i)]);

  for (int t = width - 1; t >= 0; --t) {
    const std::size_t prefixes = dim >> (t + 1);
    std::vector<double> n0(prefixes, 0.0), n1(prefixes, 0.0);
    for (std::size_t i = 0; i < dim; ++i) ((i >> t) & 1 ? n1 : n0)[i >> (t + 1)] += prob[i];
    std::vector<double> theta(prefixes);
    for (std::size_t p = 0; p < prefixes; ++p) theta[p] = 2 * std::atan2(std::sqrt(n1[p]), std::sqrt(n0[p]));
    std::vector<int> controls;
    for (int q = t + 1; q < width; ++q) controls.push_back(q);
    uniformly_controlled_rotation(out, true, t, controls, theta);
  }

  std::vector<double> omega(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx z = v[static_cast<Eigen::Index>(i)];
    omega[i] = std::abs(z) > 1e-14 ? std::arg(z) : 0.0;
  }
  for (int t = 0; t < width; ++t) {
    const std::size_t half = omega.size() / 2;
    std::vector<double> delta(half), mean(half);
    for (std::size_t p = 0; p < half; ++p) {
      delta[p] = omega[2 * p + 1] - omega[2 * p];
      mean[p] = 0.5 * (omega[2 * p + 1] + omega[2 * p]);
    }
    std::vector<int> controls;
    for (int q = t + 1; q < width; ++q) controls.push_back(q);
    uniformly_controlled_rotation(out, false, t, controls, delta);
    omega = std::move(mean);
  }
  if (width > 0 && std::abs(omega[0]) > 1e-14) {
    RotationParams p;
    p.theta = 0;
    p.phase = omega[0];
    out.push_back(gate_r(0, p));
  }
  return Circuit::from_gates(width, out);
}

}  // namespace skewls
