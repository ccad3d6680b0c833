#include "skewls/transpiler.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <variant>

#include "skewls/errors.hpp"

namespace skewls {

int ceil_log2(long long n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

PermutationSpec PermutationSpec::identity(int n) {
  PermutationSpec p;
  p.n = n;
  p.targets.resize(n);
  std::iota(p.targets.begin(), p.targets.end(), 0);
  return p;
}

void PermutationSpec::check() const {
  if (static_cast<int>(targets.size()) != n) throw ContractError("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int t : targets) {
    if (t < 0 || t >= n || seen[t]) throw ContractError("permutation targets are not a bijection");
    seen[t] = true;
  }
}

PermutationSpec PermutationSpec::inverse() const {
  PermutationSpec p;
  p.n = n;
  p.targets.resize(n);
  for (int i = 0; i < n; ++i) p.targets[targets[i]] = i;
  return p;
}

// ---------------------------------------------------------------------------
// copy circuit

namespace {

long long lowest_bit_cleared(long long c) { return c - (c & -c); }

}  // namespace

Circuit copy_circuit(int n) {
  if (n < 2) throw ContractError("copy_circuit: n must be at least 2");
  const int levels = ceil_log2(n);
  const long long rows = 1LL << levels;

  // Rows of the 2^levels schedule that carry a real qubit. Row r feeds row
  // r - lowbit(r), so the set must be closed under that map; it always holds
  // the chain rows-1, rows-2, rows-4, ..., 0, which keeps every layer busy.
  std::set<long long> used{0};
  for (long long c = rows - 1; c > 0; c = lowest_bit_cleared(c)) used.insert(c);
  while (static_cast<int>(used.size()) < n) {
    for (long long c = rows - 1; c > 0; --c) {
      if (!used.count(c) && used.count(lowest_bit_cleared(c))) {
        used.insert(c);
        break;
      }
    }
  }
  std::vector<long long> order(used.begin(), used.end());
  auto qubit = [&](long long row) {
    return static_cast<int>(std::lower_bound(order.begin(), order.end(), row) - order.begin());
  };

  // Parity schedule: AddRow(2^{k-1}(2j+1) -> 2^k j), first ascending k without
  // row 0, then descending k. Its transpose is the fan-out.
  std::vector<std::pair<int, int>> parity;
  auto add_rows = [&](int k, long long j0) {
    for (long long j = j0; (j << k) < rows; ++j) {
      const long long from = (1LL << (k - 1)) * (2 * j + 1), to = (1LL << k) * j;
      if (used.count(from) && used.count(to)) parity.emplace_back(qubit(from), qubit(to));
    }
  };
  for (int k = 1; k <= levels - 1; ++k) add_rows(k, 1);
  for (int k = levels; k >= 1; --k) add_rows(k, 0);

  std::vector<Gate> gates;
  for (auto it = parity.rbegin(); it != parity.rend(); ++it) gates.push_back(gate_cnot(it->second, it->first));
  return Circuit::from_gates(n, gates);
}

Circuit fanout_complete(int source, const std::vector<int>& targets, int width) {
  if (targets.empty()) return Circuit(width);
  std::vector<int> map{source};
  map.insert(map.end(), targets.begin(), targets.end());
  return embed(copy_circuit(static_cast<int>(map.size())), width, map);
}

// ---------------------------------------------------------------------------
// controlled-layer plans

namespace {

struct GateStep {
  std::vector<Gate> gates;
};
struct FanoutStep {
  int source = 0;
  std::vector<int> targets;
};
struct ToffoliStep {
  std::vector<std::array<int, 3>> triples;  // control, control, target
};
using Step = std::variant<GateStep, FanoutStep, ToffoliStep>;
using Plan = std::vector<Step>;

struct LayerParts {
  std::vector<std::pair<int, int>> cnots;
  std::vector<std::pair<int, Mat2>> singles;
};

LayerParts split_layer(const std::vector<Gate>& gates) {
  LayerParts parts;
  std::set<int> used;
  for (const Gate& g : gates) {
    for (int q : g.qubits) {
      if (!used.insert(q).second) throw ContractError("control_one_layer: input has more than one layer");
    }
    if (g.kind == GateKind::CNOT) {
      parts.cnots.emplace_back(g.qubits[0], g.qubits[1]);
    } else if (is_single_qubit(g)) {
      parts.singles.emplace_back(g.qubits[0], single_qubit_matrix(g));
    } else {
      throw ContractError(std::string("control_one_layer: unsupported gate ") + gate_kind_name(g.kind));
    }
  }
  return parts;
}

void plan_rotations(Plan& plan, int ctl, const LayerParts& parts) {
  double alpha = 0;
  GateStep cs, bs, as;
  std::vector<int> targets, flips;
  const Mat2 x = (Mat2() << 0, 1, 1, 0).finished();
  for (const auto& [q, u] : parts.singles) {
    if ((u - x).norm() < 1e-12) {
      flips.push_back(q);  // controlled-X is a plain CNOT from the control
      continue;
    }
    const AbcDecomposition d = abc_decomposition(u);
    alpha += d.alpha;
    if (d.scalar) continue;
    targets.push_back(q);
    if (!is_identity(d.c)) cs.gates.push_back(gate_r(q, d.c));
    if (!is_identity(d.b)) bs.gates.push_back(gate_r(q, d.b));
    if (!is_identity(d.a)) as.gates.push_back(gate_r(q, d.a));
  }
  const Mat2 ph = phase_matrix(alpha);
  if (!is_identity(ph)) plan.push_back(GateStep{{gate_r(ctl, ph)}});
  if (targets.empty()) {
    if (!flips.empty()) plan.push_back(FanoutStep{ctl, flips});
    return;
  }
  std::vector<int> first = targets;
  first.insert(first.end(), flips.begin(), flips.end());
  plan.push_back(cs);
  plan.push_back(FanoutStep{ctl, first});
  plan.push_back(bs);
  plan.push_back(FanoutStep{ctl, targets});
  plan.push_back(as);
}

void plan_cnots_direct(Plan& plan, int ctl, const LayerParts& parts) {
  for (const auto& [c, t] : parts.cnots) plan.push_back(ToffoliStep{{{ctl, c, t}}});
}

// Toffoli(ctl, c, t) = Toffoli(c, a, t) CNOT(ctl, a) Toffoli(c, a, t) CNOT(ctl, a)
// for any borrowed qubit a. The CNOTs are split in two halves; each half
// borrows qubits of the other half, so its CNOT(ctl, a) steps form one fan-out.
void plan_cnots_borrowed(Plan& plan, int ctl, const LayerParts& parts) {
  auto cnots = parts.cnots;
  std::stable_sort(cnots.begin(), cnots.end());
  const std::size_t half = (cnots.size() + 1) / 2;
  const std::vector<std::pair<int, int>> s1(cnots.begin(), cnots.begin() + static_cast<long>(half));
  const std::vector<std::pair<int, int>> s2(cnots.begin() + static_cast<long>(half), cnots.end());
  for (const auto* pair : {&s1, &s2}) {
    const auto& set = *pair;
    const auto& other = (pair == &s1) ? s2 : s1;
    std::vector<int> pool;
    for (const auto& [c, t] : other) {
      pool.push_back(c);
      pool.push_back(t);
    }
    std::sort(pool.begin(), pool.end());
    ToffoliStep step;
    std::vector<int> borrowed;
    for (std::size_t i = 0; i < set.size(); ++i) {
      step.triples.push_back({set[i].first, pool[i], set[i].second});
      borrowed.push_back(pool[i]);
    }
    plan.push_back(step);
    plan.push_back(FanoutStep{ctl, borrowed});
    plan.push_back(step);
    plan.push_back(FanoutStep{ctl, borrowed});
  }
}

std::vector<Plan> candidate_plans(int ctl, const LayerParts& parts) {
  std::vector<Plan> out;
  const bool borrowed_ok = parts.cnots.size() >= 2;
  for (int strategy = 0; strategy < (borrowed_ok ? 2 : 1); ++strategy) {
    for (int rotations_first = 0; rotations_first < 2; ++rotations_first) {
      Plan p;
      if (rotations_first) plan_rotations(p, ctl, parts);
      if (strategy == 0) {
        plan_cnots_direct(p, ctl, parts);
      } else {
        plan_cnots_borrowed(p, ctl, parts);
      }
      if (!rotations_first) plan_rotations(p, ctl, parts);
      out.push_back(std::move(p));
      if (parts.singles.empty() || parts.cnots.empty()) break;
    }
  }
  return out;
}

std::vector<Gate> emit_complete(const Plan& plan, int width) {
  std::vector<Gate> out;
  for (const Step& step : plan) {
    if (const auto* g = std::get_if<GateStep>(&step)) {
      out.insert(out.end(), g->gates.begin(), g->gates.end());
    } else if (const auto* f = std::get_if<FanoutStep>(&step)) {
      const auto gates = fanout_complete(f->source, f->targets, width).gates();
      out.insert(out.end(), gates.begin(), gates.end());
    } else {
      for (const auto& t : std::get<ToffoliStep>(step).triples) out.push_back(gate_toffoli(t[0], t[1], t[2]));
    }
  }
  return out;
}

// Lowest-depth candidate, measured after appending to `prefix`.
std::vector<Gate> best_of(const std::vector<std::vector<Gate>>& candidates, int width, const GateCostModel& cost) {
  std::size_t best = 0;
  int best_depth = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const int d = depth(Circuit::from_gates(width, candidates[i]), cost);
    if (d < best_depth) {
      best_depth = d;
      best = i;
    }
  }
  return candidates.empty() ? std::vector<Gate>{} : candidates[best];
}

std::vector<Gate> controlled_layer_complete(int ctl, const std::vector<Gate>& layer, int width,
                                            const GateCostModel& cost) {
  const LayerParts parts = split_layer(layer);
  std::vector<std::vector<Gate>> candidates;
  for (const Plan& p : candidate_plans(ctl, parts)) candidates.push_back(emit_complete(p, width));
  return best_of(candidates, width, cost);
}

std::vector<Gate> shifted(const std::vector<Gate>& gates, int offset) {
  std::vector<Gate> out = gates;
  for (Gate& g : out) {
    for (int& q : g.qubits) q += offset;
  }
  return out;
}

}  // namespace

Circuit control_one_layer(const Circuit& layer, const GateCostModel& cost) {
  validate(layer);
  const Circuit flat = relayer(layer);
  if (flat.layers.size() > 1) throw ContractError("control_one_layer: input depth exceeds one layer");
  const int width = layer.width + 1;
  return Circuit::from_gates(width, controlled_layer_complete(0, shifted(flat.gates(), 1), width, cost));
}

Circuit control_with_ancillas(const Circuit& c, int s, const GateCostModel& cost) {
  validate(c);
  const int n = c.width;
  if (s < 1 || s > std::max(n, 1)) throw ContractError("control_with_ancillas: s must lie in [1, n]");
  const int width = n + s;
  const Circuit lowered = relayer(lower_to_rotations_and_cnots(c));

  // Ancillas start in |0>, so doubling copies the control in ceil(log2 s) layers.
  std::vector<Gate> copy_gates;
  for (int step = 1; step < s; step *= 2) {
    for (int i = 0; i < step && i + step < s; ++i) copy_gates.push_back(gate_cnot(i, i + step));
  }
  const Circuit copy = Circuit::from_gates(width, copy_gates);
  std::vector<Gate> out;
  out.insert(out.end(), copy_gates.begin(), copy_gates.end());

  const int capacity = (n + s - 1) / s;
  for (const auto& layer_in : lowered.layers) {
    const std::vector<Gate> layer = shifted(layer_in, s);
    std::vector<Gate> order;
    for (const Gate& g : layer) {
      if (g.kind == GateKind::CNOT) order.push_back(g);
    }
    for (const Gate& g : layer) {
      if (g.kind != GateKind::CNOT) order.push_back(g);
    }
    // Groups of roughly `capacity` qubits, each driven by one control copy.
    std::vector<std::vector<Gate>> groups(static_cast<std::size_t>(s));
    std::vector<int> load(static_cast<std::size_t>(s), 0);
    if (static_cast<int>(order.size()) <= s) {
      for (std::size_t i = 0; i < order.size(); ++i) groups[i].push_back(order[i]);
    } else {
      for (const Gate& g : order) {
        const int size = static_cast<int>(g.qubits.size());
        std::size_t pick = 0;
        for (std::size_t i = 1; i < groups.size(); ++i) {
          const bool fits_i = load[i] + size <= capacity, fits_pick = load[pick] + size <= capacity;
          if ((fits_i && !fits_pick) || (fits_i == fits_pick && load[i] < load[pick])) pick = i;
        }
        groups[pick].push_back(g);
        load[pick] += size;
      }
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i].empty()) continue;
      const int ctl = static_cast<int>(i);
      const auto part = controlled_layer_complete(ctl, groups[i], width, cost);
      out.insert(out.end(), part.begin(), part.end());
    }
  }

  const auto uncopy = inverse(copy).gates();
  out.insert(out.end(), uncopy.begin(), uncopy.end());
  return Circuit::from_gates(width, out);
}

// ---------------------------------------------------------------------------
// lattice routing

PermutationSpec snakelike_labeling(int l1, int l2) {
  if (l1 < 1 || l2 < 1) throw ContractError("snakelike_labeling: dimensions must be positive");
  PermutationSpec p;
  p.n = l1 * l2;
  for (int r = 0; r < l1; ++r) {
    for (int c = 0; c < l2; ++c) p.targets.push_back(lattice_label(r, c, l1, l2));
  }
  return p;
}

namespace {

struct Grid {
  int rows = 0, cols = 0;
  std::function<int(int, int)> label;
};

// Perfect matchings of the regular bipartite multigraph source column ->
// destination column; matching m sends its tokens to row m.
std::vector<int> assign_rows(const Grid& grid, const std::vector<int>& start_row,
                             const std::vector<int>& start_col, const std::vector<int>& dest_col) {
  const int tokens = grid.rows * grid.cols;
  std::vector<int> row_of(tokens, -1);
  std::vector<bool> done(tokens, false);
  for (int m = 0; m < grid.rows; ++m) {
    std::vector<std::vector<int>> edges(grid.cols);
    for (int t = 0; t < tokens; ++t) {
      if (!done[t]) edges[start_col[t]].push_back(t);
    }
    for (auto& e : edges) {
      std::stable_partition(e.begin(), e.end(), [&](int t) { return start_row[t] == m; });
    }
    std::vector<int> match_right(grid.cols, -1);  // destination column -> token
    std::function<bool(int, std::vector<bool>&)> augment = [&](int left, std::vector<bool>& seen) {
      for (int t : edges[left]) {
        const int right = dest_col[t];
        if (seen[right]) continue;
        seen[right] = true;
        if (match_right[right] < 0 || augment(start_col[match_right[right]], seen)) {
          match_right[right] = t;
          return true;
        }
      }
      return false;
    };
    for (int left = 0; left < grid.cols; ++left) {
      std::vector<bool> seen(grid.cols, false);
      if (!augment(left, seen)) throw NumericalFailure("route: no perfect matching in regular graph");
    }
    for (int t : match_right) {
      row_of[t] = m;
      done[t] = true;
    }
  }
  return row_of;
}

// Odd-even transposition sort along each line of cells, in parallel.
void sort_lines(const Grid& grid, std::vector<int>& at, const std::vector<std::vector<std::pair<int, int>>>& lines,
                const std::function<int(int)>& key, std::vector<std::vector<Gate>>& layers) {
  auto cell = [&](std::pair<int, int> rc) { return rc.first * grid.cols + rc.second; };
  for (int round = 0;; ++round) {
    bool sorted = true;
    for (const auto& line : lines) {
      for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        sorted = sorted && key(at[cell(line[i])]) <= key(at[cell(line[i + 1])]);
      }
    }
    if (sorted) return;
    std::vector<Gate> layer;
    for (const auto& line : lines) {
      for (std::size_t i = round % 2; i + 1 < line.size(); i += 2) {
        const int a = cell(line[i]), b = cell(line[i + 1]);
        if (key(at[a]) > key(at[b])) {
          std::swap(at[a], at[b]);
          layer.push_back(gate_swap(grid.label(line[i].first, line[i].second),
                                    grid.label(line[i + 1].first, line[i + 1].second)));
        }
      }
    }
    if (!layer.empty()) layers.push_back(std::move(layer));
  }
}

// Column phase, row phase, column phase. dest[t] = destination (row, col) of
// the token that starts in cell t = row * cols + col.
std::vector<std::vector<Gate>> route_three_phase(const Grid& grid, const std::vector<std::pair<int, int>>& dest) {
  const int tokens = grid.rows * grid.cols;
  std::vector<int> start_row(tokens), start_col(tokens), dest_col(tokens), dest_row(tokens);
  for (int t = 0; t < tokens; ++t) {
    start_row[t] = t / grid.cols;
    start_col[t] = t % grid.cols;
    dest_row[t] = dest[t].first;
    dest_col[t] = dest[t].second;
  }
  const std::vector<int> mid_row = assign_rows(grid, start_row, start_col, dest_col);

  std::vector<std::vector<std::pair<int, int>>> columns(grid.cols), rows(grid.rows);
  for (int c = 0; c < grid.cols; ++c) {
    for (int r = 0; r < grid.rows; ++r) columns[c].emplace_back(r, c);
  }
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) rows[r].emplace_back(r, c);
  }
  std::vector<int> at(tokens);
  std::iota(at.begin(), at.end(), 0);
  std::vector<std::vector<Gate>> layers;
  sort_lines(grid, at, columns, [&](int t) { return mid_row[t]; }, layers);
  sort_lines(grid, at, rows, [&](int t) { return dest_col[t]; }, layers);
  sort_lines(grid, at, columns, [&](int t) { return dest_row[t]; }, layers);
  return layers;
}

}  // namespace

Circuit route_permutation_lattice(const PermutationSpec& p, int l1, int l2) {
  if (l1 < 1 || l2 < 1) throw ContractError("route_permutation_lattice: dimensions must be positive");
  p.check();
  if (p.n != l1 * l2) throw ContractError("route_permutation_lattice: permutation size does not match lattice");
  const int n = p.n;
  Circuit out(n);
  bool identity = true;
  for (int i = 0; i < n; ++i) identity = identity && p.targets[i] == i;
  if (identity) return out;

  // Tokens are indexed by grid cell; token in cell of label i goes to cell of targets[i].
  Grid straight{l1, l2, [l1, l2](int r, int c) { return lattice_label(r, c, l1, l2); }};
  std::vector<std::pair<int, int>> dest(n);
  for (int r = 0; r < l1; ++r) {
    for (int c = 0; c < l2; ++c) dest[r * l2 + c] = lattice_cell(p.targets[lattice_label(r, c, l1, l2)], l1, l2);
  }
  auto layers = route_three_phase(straight, dest);

  Grid turned{l2, l1, [l1, l2](int r, int c) { return lattice_label(c, r, l1, l2); }};
  std::vector<std::pair<int, int>> dest_t(n);
  for (int r = 0; r < l2; ++r) {
    for (int c = 0; c < l1; ++c) {
      const auto [dr, dc] = lattice_cell(p.targets[lattice_label(c, r, l1, l2)], l1, l2);
      dest_t[r * l1 + c] = {dc, dr};
    }
  }
  auto layers_t = route_three_phase(turned, dest_t);
  out.layers = layers_t.size() < layers.size() ? layers_t : layers;
  return out;
}

Circuit map_one_layer_cnots_to_lattice(const Circuit& layer, int l1, int l2) {
  validate(layer);
  if (l1 < 1 || l2 < 1 || layer.width != l1 * l2) {
    throw ContractError("map_one_layer_cnots_to_lattice: width must equal l1*l2");
  }
  const Circuit flat = relayer(layer);
  if (flat.layers.size() > 1) throw ContractError("map_one_layer_cnots_to_lattice: input depth exceeds one layer");
  const ConnectivityGraph g = ConnectivityGraph::lattice(l1, l2);
  std::vector<Gate> cnots = flat.gates();
  bool adjacent = true;
  for (const Gate& gate : cnots) {
    if (gate.kind != GateKind::CNOT) throw ContractError("map_one_layer_cnots_to_lattice: non-CNOT gate");
    adjacent = adjacent && g.adjacent(gate.qubits[0], gate.qubits[1]);
  }
  if (adjacent) return flat;

  PermutationSpec p;
  p.n = layer.width;
  p.targets.assign(p.n, -1);
  int slot = 0;
  for (const Gate& gate : cnots) {
    p.targets[gate.qubits[0]] = slot++;
    p.targets[gate.qubits[1]] = slot++;
  }
  for (int q = 0; q < p.n; ++q) {
    if (p.targets[q] < 0) p.targets[q] = slot++;
  }
  const Circuit route = route_permutation_lattice(p, l1, l2);
  std::vector<Gate> out = route.gates();
  for (const Gate& gate : cnots) out.push_back(gate_cnot(p.targets[gate.qubits[0]], p.targets[gate.qubits[1]]));
  const auto back = inverse(route).gates();
  out.insert(out.end(), back.begin(), back.end());
  return Circuit::from_gates(layer.width, out);
}

// ---------------------------------------------------------------------------
// lattice fan-out

namespace {

// CNOT schedule adding x_root into every leaf of a subtree whose internal
// vertices are restored afterwards.
void subtree_fanout(int root, const std::vector<std::vector<int>>& children, const std::vector<bool>& in_s,
                    std::vector<Gate>& out) {
  std::vector<std::vector<int>> by_layer{{root}};
  while (true) {
    std::vector<int> next;
    for (int v : by_layer.back()) {
      if (v != root && in_s[v]) continue;
      for (int w : children[v]) next.push_back(w);
    }
    if (next.empty()) break;
    by_layer.push_back(next);
  }
  const int top = static_cast<int>(by_layer.size()) - 1;  // deepest layer index
  auto internal = [&](int v) { return v == root || !in_s[v]; };
  auto pass = [&](bool skip_leaves) {
    for (int l = top - 1; l >= 1; --l) {
      for (int v : by_layer[l]) {
        if (!internal(v)) continue;
        for (int w : children[v]) {
          if (!(skip_leaves && in_s[w])) out.push_back(gate_cnot(v, w));
        }
      }
    }
    for (int l = 0; l <= top - 1; ++l) {
      for (int v : by_layer[l]) {
        if (!internal(v)) continue;
        for (int w : children[v]) {
          if (!(skip_leaves && in_s[w])) out.push_back(gate_cnot(v, w));
        }
      }
    }
  };
  pass(false);
  pass(true);
}

// Fan-out from path[0] into the marked path vertices; unmarked ones are restored.
void path_fanout(const std::vector<int>& path, const std::vector<bool>& hit, int n, std::vector<Gate>& out) {
  int last = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (hit[i]) last = static_cast<int>(i);
  }
  if (last == 0) return;
  std::vector<std::vector<int>> children(n);
  std::vector<bool> in_s(n, false);
  in_s[path[0]] = true;
  for (int i = 1; i <= last; ++i) {
    children[path[i - 1]].push_back(path[i]);
    in_s[path[i]] = hit[i];
  }
  std::vector<int> roots;
  for (int i = 0; i < last; ++i) {
    if (in_s[path[i]]) roots.push_back(path[i]);
  }
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) subtree_fanout(*it, children, in_s, out);
  for (std::size_t i = 1; i < roots.size(); ++i) subtree_fanout(roots[i], children, in_s, out);
}

}  // namespace

Circuit fanout_on_lattice(int control, const std::vector<int>& targets, int l1, int l2) {
  if (l1 < 1 || l2 < 1) throw ContractError("fanout_on_lattice: dimensions must be positive");
  const int n = l1 * l2;
  const ConnectivityGraph g = ConnectivityGraph::lattice(l1, l2);
  if (control < 0 || control >= n) throw ContractError("fanout_on_lattice: control out of range");
  std::set<int> distinct;
  for (int t : targets) {
    if (t < 0 || t >= n || t == control || !distinct.insert(t).second) {
      throw ContractError("fanout_on_lattice: invalid target set");
    }
  }
  std::vector<Gate> out;
  bool all_adjacent = true;
  for (int t : targets) all_adjacent = all_adjacent && g.adjacent(control, t);
  if (all_adjacent) {
    for (int t : targets) out.push_back(gate_cnot(control, t));
    return Circuit::from_gates(n, out);
  }

  // Move the control to cell (0,0) along its row, then up the first column.
  std::vector<Gate> chain;
  std::vector<int> pos(n);  // qubit -> current cell label
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<int> who(n);
  std::iota(who.begin(), who.end(), 0);
  {
    auto [r, c] = lattice_cell(control, l1, l2);
    std::vector<int> path{control};
    while (c > 0) path.push_back(lattice_label(r, --c, l1, l2));
    while (r > 0) path.push_back(lattice_label(--r, c, l1, l2));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      chain.push_back(gate_swap(path[i], path[i + 1]));
      std::swap(who[path[i]], who[path[i + 1]]);
    }
    for (int cell = 0; cell < n; ++cell) pos[who[cell]] = cell;
  }

  // Comb tree: the rows hang off column 0. Each row and the spine are handled
  // as separate paths so the passes over different rows run side by side.
  std::vector<std::vector<int>> row_targets(l1);
  std::vector<bool> spine_target(l1, false);
  for (int t : targets) {
    const auto [r, c] = lattice_cell(pos[t], l1, l2);
    if (c == 0) {
      spine_target[r] = true;
    } else {
      row_targets[r].push_back(c);
    }
  }
  auto row_pass = [&](int first_row) {
    for (int r = first_row; r < l1; ++r) {
      if (row_targets[r].empty()) continue;
      std::vector<int> path;
      std::vector<bool> hit(l2, false);
      for (int c = 0; c < l2; ++c) path.push_back(lattice_label(r, c, l1, l2));
      for (int c : row_targets[r]) hit[c] = true;
      path_fanout(path, hit, n, out);
    }
  };
  auto spine_pass = [&](const std::vector<bool>& hit) {
    std::vector<int> path;
    for (int r = 0; r < l1; ++r) path.push_back(lattice_label(r, 0, l1, l2));
    path_fanout(path, hit, n, out);
  };

  // Rows first add their spine cell, then spine cell plus control; the spine
  // cells are then put back except those that are targets themselves.
  std::vector<bool> carry(l1, false), fix(l1, false);
  for (int r = 1; r < l1; ++r) {
    carry[r] = !row_targets[r].empty();
    fix[r] = carry[r] != spine_target[r];
  }
  out = chain;
  row_pass(1);
  spine_pass(carry);
  row_pass(0);
  spine_pass(fix);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(*it);
  return Circuit::from_gates(n, out);
}

// ---------------------------------------------------------------------------
// lattice control

namespace {

int middle_of(const std::array<int, 3>& t, const ConnectivityGraph& g) {
  for (int i = 0; i < 3; ++i) {
    if (g.adjacent(t[i], t[(i + 1) % 3]) && g.adjacent(t[i], t[(i + 2) % 3])) return t[i];
  }
  return -1;
}

void expand_toffoli(const std::array<int, 3>& t, int middle, const ConnectivityGraph& g, std::vector<Gate>& out) {
  for (const Gate& gate : toffoli_network(t[0], t[1], t[2])) {
    if (gate.kind == GateKind::CNOT && !g.adjacent(gate.qubits[0], gate.qubits[1])) {
      const int x = gate.qubits[0], y = gate.qubits[1];
      out.push_back(gate_cnot(middle, y));
      out.push_back(gate_cnot(x, middle));
      out.push_back(gate_cnot(middle, y));
      out.push_back(gate_cnot(x, middle));
    } else {
      out.push_back(gate);
    }
  }
}

void emit_toffolis_on_lattice(const ToffoliStep& step, int l1, int l2, std::vector<Gate>& out) {
  const ConnectivityGraph g = ConnectivityGraph::lattice(l1, l2);
  bool ready = true;
  for (const auto& t : step.triples) ready = ready && middle_of(t, g) >= 0;
  if (ready) {
    for (const auto& t : step.triples) expand_toffoli(t, middle_of(t, g), g, out);
    return;
  }
  // Place triple k on snake cells 3k, 3k+1, 3k+2 with the target in the middle.
  PermutationSpec p;
  p.n = l1 * l2;
  p.targets.assign(p.n, -1);
  int slot = 0;
  for (const auto& t : step.triples) {
    p.targets[t[0]] = slot;
    p.targets[t[2]] = slot + 1;
    p.targets[t[1]] = slot + 2;
    slot += 3;
  }
  for (int q = 0; q < p.n; ++q) {
    if (p.targets[q] < 0) p.targets[q] = slot++;
  }
  const Circuit route = route_permutation_lattice(p, l1, l2);
  const auto there = route.gates();
  out.insert(out.end(), there.begin(), there.end());
  for (const auto& t : step.triples) {
    const std::array<int, 3> moved{p.targets[t[0]], p.targets[t[1]], p.targets[t[2]]};
    expand_toffoli(moved, moved[2], g, out);
  }
  const auto back = inverse(route).gates();
  out.insert(out.end(), back.begin(), back.end());
}

std::vector<Gate> emit_lattice(const Plan& plan, int l1, int l2) {
  std::vector<Gate> out;
  for (const Step& step : plan) {
    if (const auto* gs = std::get_if<GateStep>(&step)) {
      out.insert(out.end(), gs->gates.begin(), gs->gates.end());
    } else if (const auto* f = std::get_if<FanoutStep>(&step)) {
      const auto gates = fanout_on_lattice(f->source, f->targets, l1, l2).gates();
      out.insert(out.end(), gates.begin(), gates.end());
    } else {
      emit_toffolis_on_lattice(std::get<ToffoliStep>(step), l1, l2, out);
    }
  }
  return out;
}

}  // namespace

Circuit control_circuit_on_lattice(const Circuit& c, int l1, int l2) {
  validate(c);
  if (l1 < 1 || l2 < 1) throw ContractError("control_circuit_on_lattice: dimensions must be positive");
  const int width = l1 * l2;
  if (c.width > width - 1) {
    throw ContractError("control_circuit_on_lattice: circuit width " + std::to_string(c.width) +
                        " does not fit a " + std::to_string(l1) + "x" + std::to_string(l2) +
                        " lattice with a control cell");
  }
  const Circuit lowered = relayer(lower_to_rotations_and_cnots(c));
  const GateCostModel unit = GateCostModel::unit();
  std::vector<Gate> out;
  for (const auto& layer : lowered.layers) {
    const LayerParts parts = split_layer(shifted(layer, 1));
    std::vector<std::vector<Gate>> candidates;
    for (const Plan& p : candidate_plans(0, parts)) candidates.push_back(emit_lattice(p, l1, l2));
    const auto best = best_of(candidates, width, unit);
    out.insert(out.end(), best.begin(), best.end());
  }
  return Circuit::from_gates(width, out);
}

Circuit control_circuit_on_path(const Circuit& c, int n) { return control_circuit_on_lattice(c, n, 1); }

int depth_lower_bound(int n, const ConnectivityGraph& g) { return std::max(ceil_log2(n), g.diameter()); }

// ---------------------------------------------------------------------------
// constructions and reports

std::string Construction::name() const {
  switch (kind) {
    case ConstructionKind::Naive: return "naive";
    case ConstructionKind::Ancilla: return "ancilla(" + std::to_string(ancillas) + ")";
    case ConstructionKind::Lattice: return "lattice(" + std::to_string(l1) + "," + std::to_string(l2) + ")";
  }
  return "?";
}

int controlled_width(int n, const Construction& how) {
  switch (how.kind) {
    case ConstructionKind::Naive: return n + 1;
    case ConstructionKind::Ancilla: return n + how.ancillas;
    case ConstructionKind::Lattice: return how.l1 * how.l2;
  }
  return n + 1;
}

int data_offset(int n, const Construction& how) {
  (void)n;
  return how.kind == ConstructionKind::Ancilla ? how.ancillas : 1;
}

Circuit controlled(const Circuit& u, const Construction& how, const GateCostModel& cost) {
  switch (how.kind) {
    case ConstructionKind::Naive: validate(u); return controlled_naive(u);
    case ConstructionKind::Ancilla: return control_with_ancillas(u, how.ancillas, cost);
    case ConstructionKind::Lattice: return control_circuit_on_lattice(u, how.l1, how.l2);
  }
  throw ContractError("unknown construction");
}

int hadamard_depth_floor(const Circuit& u, const Construction& how) {
  std::set<int> support;
  for (const Gate& g : u.gates()) {
    if (is_single_qubit(g) && abc_decomposition(single_qubit_matrix(g)).scalar) continue;
    support.insert(g.qubits.begin(), g.qubits.end());
  }
  if (support.empty()) return 0;
  const int k = static_cast<int>(support.size());
  int reach = 1;
  if (how.kind == ConstructionKind::Lattice) {
    const ConnectivityGraph g = ConnectivityGraph::lattice(how.l1, how.l2);
    for (int q : support) reach = std::max(reach, g.distance(0, q + 1));
  }
  return std::max(ceil_log2(k), reach);
}

DepthReport depth_report(const Circuit& u, const Construction& how, const GateCostModel& cost) {
  const Circuit ctrl = controlled(u, how, cost);
  DepthReport r;
  r.construction = how.name();
  r.cost_model = cost;
  r.measured_depth = depth(ctrl, cost);
  r.lower_bound = hadamard_depth_floor(u, how);
  r.metadata["ancilla_phase_gate"] = "Sdg";
  r.metadata["control_qubit"] = "0";
  r.metadata["data_offset"] = std::to_string(data_offset(u.width, how));
  const int n = u.width;
  const int d = static_cast<int>(relayer(lower_to_rotations_and_cnots(u)).layers.size());
  switch (how.kind) {
    case ConstructionKind::Naive:
      r.connectivity = ConnectivityGraph::complete(ctrl.width);
      r.bound_formula = "none";
      break;
    case ConstructionKind::Ancilla: {
      const int s = how.ancillas;
      r.connectivity = ConnectivityGraph::complete(ctrl.width);
      r.bound_formula = "2*ceil(log2 s) + 12*d*ceil(log2(n/s)) + 9*d";
      r.bound_value = 2 * ceil_log2(s) + 12 * d * ceil_log2((n + s - 1) / s) + 9 * d;
      r.metadata["d"] = std::to_string(d);
      break;
    }
    case ConstructionKind::Lattice:
      r.connectivity = ConnectivityGraph::lattice(how.l1, how.l2);
      r.bound_formula = "C_lat*d*(l1+l2)";
      r.bound_value = kLatticeConstant * d * (how.l1 + how.l2);
      r.metadata["d"] = std::to_string(d);
      r.metadata["C_route"] = std::to_string(kRouteConstant);
      r.metadata["C_fan"] = std::to_string(kFanoutConstant);
      r.metadata["C_lat"] = std::to_string(kLatticeConstant);
      break;
  }
  (void)n;
  return r;
}

}  // namespace skewls
