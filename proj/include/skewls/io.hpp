#pragma once

#include <string>

#include <json.hpp>

#include "skewls/hadamard.hpp"
#include "skewls/solver.hpp"

namespace skewls {

using Json = nlohmann::ordered_json;

// Parses text, reporting syntax errors with their line and column as ContractError.
Json parse_json(const std::string& text, const std::string& source = "input");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Two-space indented with a trailing newline.
std::string dump_json(const Json& j);

// {"width": n, "layers": [[{"kind", "qubits", "params"}, ...], ...]}
Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j, const std::string& where = "circuit");

// {"variant": "lattice", "l1", "l2"} | {"variant": "complete"|"path", "n"} |
// {"variant": "explicit", "n", "edges": [[a, b], ...]}
Json graph_to_json(const ConnectivityGraph& g);
ConnectivityGraph graph_from_json(const Json& j, const std::string& where = "graph");

Json cost_model_to_json(const GateCostModel& m);

Json complex_to_json(cplx z);
Json vector_to_json(const Vector& v);
Json matrix_to_json(const Matrix& m);
// Entries are numbers or [re, im] pairs.
cplx complex_from_json(const Json& j, const std::string& where);
Vector vector_from_json(const Json& j, const std::string& where);
Matrix matrix_from_json(const Json& j, const std::string& where);

Json oracle_to_json(const ColumnOracle& o);
ColumnOracle oracle_from_json(const Json& j, const std::string& where);

// {"columns": [...], "rhs": {"oracle": {...}} | {"vector": [...]}} or the raw
// form {"matrix": [[...]], "rhs": [...]}.
Json instance_to_json(const LinearSystemInstance& inst);
LinearSystemInstance instance_from_json(const Json& j);

// {"left": [...], "right": [...], "rhs": {...}} or raw {"a1", "a2", "rhs"}.
Json factorized_to_json(const FactorizedInstance& f);
FactorizedInstance factorized_from_json(const Json& j);

Json depth_report_to_json(const DepthReport& r);
Json overlap_to_json(const OverlapEstimate& e);
Json report_to_json(const SolveReport& r);

}  // namespace skewls
