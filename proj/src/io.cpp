#include "skewls/io.hpp"

#include <fstream>
#include <sstream>

#include "skewls/errors.hpp"

namespace skewls {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ContractError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double as_double(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

std::string variant_name(GraphVariant v) {
  switch (v) {
    case GraphVariant::Complete: return "complete";
    case GraphVariant::Lattice: return "lattice";
    case GraphVariant::Path: return "path";
    case GraphVariant::Explicit: return "explicit";
  }
  return "";
}

Json rhs_oracle_json(const ColumnOracle& o) { return Json{{"oracle", oracle_to_json(o)}}; }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ContractError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError(path + ": cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError(path + ": cannot open for writing");
  out << text;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json circuit_to_json(const Circuit& c) {
  Json layers = Json::array();
  for (const auto& layer : c.layers) {
    Json l = Json::array();
    for (const auto& g : layer) {
      Json params = Json::array();
      for (double p : g.params) params.push_back(p);
      l.push_back(Json{{"kind", gate_kind_name(g.kind)}, {"qubits", g.qubits}, {"params", params}});
    }
    layers.push_back(l);
  }
  return Json{{"width", c.width}, {"layers", layers}};
}

Circuit circuit_from_json(const Json& j, const std::string& where) {
  Circuit c(as_int(field(j, "width", where), where + ".width"));
  const Json& layers = as_array(field(j, "layers", where), where + ".layers");
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const std::string lw = at(where + ".layers", li);
    std::vector<Gate> layer;
    for (std::size_t gi = 0; gi < as_array(layers[li], lw).size(); ++gi) {
      const std::string gw = at(lw, gi);
      const Json& g = layers[li][gi];
      const Json& kind = field(g, "kind", gw);
      if (!kind.is_string()) fail(gw + ".kind", "expected a string");
      Gate gate;
      try {
        gate.kind = gate_kind_from_name(kind.get<std::string>());
      } catch (const ContractError&) {
        fail(gw + ".kind", "unknown gate kind '" + kind.get<std::string>() + "'");
      }
      const Json& qs = as_array(field(g, "qubits", gw), gw + ".qubits");
      for (std::size_t k = 0; k < qs.size(); ++k) gate.qubits.push_back(as_int(qs[k], at(gw + ".qubits", k)));
      if (g.contains("params")) {
        const Json& ps = as_array(g["params"], gw + ".params");
        for (std::size_t k = 0; k < ps.size(); ++k) gate.params.push_back(as_double(ps[k], at(gw + ".params", k)));
      }
      layer.push_back(gate);
    }
    c.layers.push_back(layer);
  }
  try {
    validate(c);
  } catch (const ContractError& e) {
    fail(where, e.what());
  }
  return c;
}

Json graph_to_json(const ConnectivityGraph& g) {
  Json j{{"variant", variant_name(g.variant)}};
  if (g.variant == GraphVariant::Lattice) {
    j["l1"] = g.l1;
    j["l2"] = g.l2;
  } else {
    j["n"] = g.n;
  }
  if (g.variant == GraphVariant::Explicit) {
    Json edges = Json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = edges;
  }
  return j;
}

ConnectivityGraph graph_from_json(const Json& j, const std::string& where) {
  const Json& v = field(j, "variant", where);
  if (!v.is_string()) fail(where + ".variant", "expected a string");
  const std::string name = v.get<std::string>();
  try {
    if (name == "lattice") {
      return ConnectivityGraph::lattice(as_int(field(j, "l1", where), where + ".l1"),
                                        as_int(field(j, "l2", where), where + ".l2"));
    }
    const int n = as_int(field(j, "n", where), where + ".n");
    if (name == "complete") return ConnectivityGraph::complete(n);
    if (name == "path") return ConnectivityGraph::path(n);
    if (name == "explicit") {
      std::vector<std::pair<int, int>> edges;
      const Json& es = as_array(field(j, "edges", where), where + ".edges");
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (!es[i].is_array() || es[i].size() != 2) fail(at(where + ".edges", i), "expected a pair");
        edges.emplace_back(as_int(es[i][0], at(where + ".edges", i)), as_int(es[i][1], at(where + ".edges", i)));
      }
      return ConnectivityGraph::explicit_edges(n, edges);
    }
  } catch (const ContractError& e) {
    if (std::string(e.what()).rfind(where, 0) == 0) throw;
    fail(where, e.what());
  }
  fail(where + ".variant", "unknown variant '" + name + "'");
}

Json cost_model_to_json(const GateCostModel& m) {
  Json j = Json::object();
  for (int k = 0; k < kGateKindCount; ++k) j[gate_kind_name(static_cast<GateKind>(k))] = m.cost[k];
  return j;
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(complex_to_json(v[i]));
  return j;
}

Json matrix_to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vector_to_json(m.row(r).transpose()));
  return j;
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  fail(where, "expected a number or [re, im]");
}

Vector vector_from_json(const Json& j, const std::string& where) {
  as_array(j, where);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i], at(where, i));
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  as_array(j, where);
  if (j.empty()) fail(where, "empty matrix");
  const std::size_t cols = as_array(j[0], at(where, 0)).size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r], at(where, r));
    if (static_cast<std::size_t>(row.size()) != cols) fail(at(where, r), "ragged row");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json oracle_to_json(const ColumnOracle& o) { return Json{{"prep", circuit_to_json(o.prep)}, {"norm", o.norm}}; }

ColumnOracle oracle_from_json(const Json& j, const std::string& where) {
  ColumnOracle o;
  o.prep = circuit_from_json(field(j, "prep", where), where + ".prep");
  o.norm = as_double(field(j, "norm", where), where + ".norm");
  if (!(o.norm >= 0)) fail(where + ".norm", "must be nonnegative");
  return o;
}

Json instance_to_json(const LinearSystemInstance& inst) {
  Json cols = Json::array();
  for (const auto& c : inst.columns) cols.push_back(oracle_to_json(c));
  Json j{{"columns", cols}};
  if (inst.rhs_oracle) j["rhs"] = rhs_oracle_json(*inst.rhs_oracle);
  if (inst.rhs_vector) j["rhs"] = Json{{"vector", vector_to_json(*inst.rhs_vector)}};
  return j;
}

LinearSystemInstance instance_from_json(const Json& j) {
  if (j.is_object() && j.contains("matrix")) {
    const Matrix a = matrix_from_json(j["matrix"], "instance.matrix");
    const Vector rhs = vector_from_json(field(j, "rhs", "instance"), "instance.rhs");
    try {
      return instance_from_matrix(a, rhs);
    } catch (const ContractError& e) {
      fail("instance", e.what());
    }
  }
  LinearSystemInstance inst;
  const Json& cols = as_array(field(j, "columns", "instance"), "instance.columns");
  for (std::size_t i = 0; i < cols.size(); ++i) inst.columns.push_back(oracle_from_json(cols[i], at("instance.columns", i)));
  const Json& rhs = field(j, "rhs", "instance");
  if (rhs.is_object() && rhs.contains("oracle")) {
    inst.rhs_oracle = oracle_from_json(rhs["oracle"], "instance.rhs.oracle");
  } else if (rhs.is_object() && rhs.contains("vector")) {
    inst.rhs_vector = vector_from_json(rhs["vector"], "instance.rhs.vector");
  } else {
    fail("instance.rhs", "expected {\"oracle\": ...} or {\"vector\": ...}");
  }
  return inst;
}

Json factorized_to_json(const FactorizedInstance& f) {
  Json left = Json::array(), right = Json::array();
  for (const auto& c : f.left) left.push_back(oracle_to_json(c));
  for (const auto& c : f.right) right.push_back(oracle_to_json(c));
  return Json{{"left", left}, {"right", right}, {"rhs", rhs_oracle_json(f.rhs)}};
}

FactorizedInstance factorized_from_json(const Json& j) {
  if (j.is_object() && j.contains("a1")) {
    const Matrix a1 = matrix_from_json(j["a1"], "instance.a1");
    const Matrix a2 = matrix_from_json(field(j, "a2", "instance"), "instance.a2");
    const Vector b = vector_from_json(field(j, "rhs", "instance"), "instance.rhs");
    try {
      return factorized_from_matrices(a1, a2, b);
    } catch (const ContractError& e) {
      fail("instance", e.what());
    }
  }
  FactorizedInstance f;
  const Json& left = as_array(field(j, "left", "instance"), "instance.left");
  const Json& right = as_array(field(j, "right", "instance"), "instance.right");
  for (std::size_t i = 0; i < left.size(); ++i) f.left.push_back(oracle_from_json(left[i], at("instance.left", i)));
  for (std::size_t i = 0; i < right.size(); ++i) f.right.push_back(oracle_from_json(right[i], at("instance.right", i)));
  f.rhs = oracle_from_json(field(field(j, "rhs", "instance"), "oracle", "instance.rhs"), "instance.rhs.oracle");
  return f;
}

Json depth_report_to_json(const DepthReport& r) {
  Json j{{"construction", r.construction},
         {"measured_depth", r.measured_depth},
         {"bound_formula", r.bound_formula},
         {"bound_value", r.bound_value ? Json(*r.bound_value) : Json(nullptr)},
         {"lower_bound", r.lower_bound},
         {"cost_model", cost_model_to_json(r.cost_model)},
         {"connectivity", graph_to_json(r.connectivity)}};
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

Json overlap_to_json(const OverlapEstimate& e) {
  return Json{{"value", complex_to_json(e.value)},
              {"shots_per_part", e.shots_per_part},
              {"standard_error", e.standard_error},
              {"seed", e.seed}};
}

Json report_to_json(const SolveReport& r) {
  Json budget = Json::object(), shots = Json::object(), seeds = Json::object(), depths = Json::array();
  for (const auto& [k, v] : r.budget) budget[k] = v;
  for (const auto& [k, v] : r.shots_used) shots[k] = v;
  for (const auto& [k, v] : r.seeds) seeds[k] = v;
  for (const auto& [label, d] : r.depth_stats) depths.push_back(Json{{"circuit", label}, {"report", depth_report_to_json(d)}});
  return Json{{"problem", r.problem},
              {"coefficients", vector_to_json(r.coefficients)},
              {"residual_gap", r.residual_gap},
              {"lambda_used", r.lambda_used},
              {"epsilon", r.epsilon},
              {"budget", budget},
              {"shots_used", shots},
              {"seeds", seeds},
              {"depth_stats", depths}};
}

}  // namespace skewls
