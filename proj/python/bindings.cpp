#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewls/errors.hpp"
#include "skewls/io.hpp"

namespace py = pybind11;
using namespace skewls;

namespace {

Construction make_construction(const std::string& kind, int ancillas, int l1, int l2) {
  if (kind == "naive") return Construction::naive();
  if (kind == "ancilla") return Construction::ancilla(ancillas);
  if (kind == "lattice") return Construction::lattice(l1, l2);
  throw ContractError("unknown construction '" + kind + "'");
}

Circuit circuit_of(const std::string& text) { return circuit_from_json(parse_json(text)); }

std::string text_of(const Circuit& c) { return dump_json(circuit_to_json(c)); }

SolveConfig make_config(double epsilon, const std::string& mode, std::optional<std::uint64_t> shots, std::uint64_t seed,
                        double budget_scale) {
  SolveConfig cfg;
  cfg.epsilon = epsilon;
  if (mode != "exact" && mode != "sampled") throw ContractError("mode must be 'exact' or 'sampled'");
  cfg.mode = mode == "exact" ? EstimationMode::Exact : EstimationMode::Sampled;
  cfg.shot_override = shots;
  cfg.seed = seed;
  cfg.budget_scale = budget_scale;
  cfg.collect_depth = false;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid solvers for skewed linear systems on a simulated backend";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("label"));

  m.def("copy_circuit", [](int n) { return text_of(copy_circuit(n)); }, py::arg("n"));
  m.def("circuit_depth", [](const std::string& c) { return depth(circuit_of(c)); }, py::arg("circuit"));
  m.def("overlap_exact", [](const std::string& c) { return overlap_amplitude(circuit_of(c)); }, py::arg("circuit"));

  m.def(
      "controlled",
      [](const std::string& c, const std::string& kind, int ancillas, int l1, int l2) {
        return text_of(controlled(circuit_of(c), make_construction(kind, ancillas, l1, l2)));
      },
      py::arg("circuit"), py::arg("construction") = "naive", py::arg("ancillas") = 1, py::arg("l1") = 0, py::arg("l2") = 0);

  m.def(
      "depth_report",
      [](const std::string& c, const std::string& kind, int ancillas, int l1, int l2) {
        return depth_report_to_json(depth_report(circuit_of(c), make_construction(kind, ancillas, l1, l2))).dump();
      },
      py::arg("circuit"), py::arg("construction") = "naive", py::arg("ancillas") = 1, py::arg("l1") = 0, py::arg("l2") = 0);

  m.def(
      "estimate_overlap",
      [](const std::string& a, const std::string& b, std::uint64_t shots, std::uint64_t seed, const std::string& kind,
         int ancillas, int l1, int l2) {
        const OverlapEstimate e =
            estimate_overlap(circuit_of(a), circuit_of(b), shots, seed, make_construction(kind, ancillas, l1, l2));
        return py::make_tuple(e.value, e.standard_error);
      },
      py::arg("a"), py::arg("b"), py::arg("shots") = 0, py::arg("seed") = 0, py::arg("construction") = "naive",
      py::arg("ancillas") = 1, py::arg("l1") = 0, py::arg("l2") = 0);

  m.def(
      "solve_overdetermined",
      [](const Matrix& a, const Vector& b, double epsilon, const std::string& mode, std::optional<std::uint64_t> shots,
         std::uint64_t seed, double budget_scale) {
        return report_to_json(solve_overdetermined(instance_from_matrix(a, b), make_config(epsilon, mode, shots, seed, budget_scale)))
            .dump();
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon") = 0.1, py::arg("mode") = "exact", py::arg("shots") = py::none(),
      py::arg("seed") = 0, py::arg("budget_scale") = 1.0);

  m.def(
      "solve_underdetermined",
      [](const Matrix& a, const Vector& c, double epsilon, const std::string& mode, std::optional<std::uint64_t> shots,
         std::uint64_t seed, double budget_scale) {
        if (c.size() != a.cols()) throw ContractError("c must have one entry per column of A");
        return report_to_json(solve_underdetermined(instance_from_matrix(a, c), make_config(epsilon, mode, shots, seed, budget_scale)))
            .dump();
      },
      py::arg("a"), py::arg("c"), py::arg("epsilon") = 0.1, py::arg("mode") = "exact", py::arg("shots") = py::none(),
      py::arg("seed") = 0, py::arg("budget_scale") = 1.0);

  m.def(
      "solve_factorized",
      [](const Matrix& a1, const Matrix& a2, const Vector& b, bool relaxed, double epsilon, const std::string& mode,
         std::optional<std::uint64_t> shots, std::uint64_t seed, double budget_scale) {
        const FactorizedInstance f = factorized_from_matrices(a1, a2, b);
        const SolveConfig cfg = make_config(epsilon, mode, shots, seed, budget_scale);
        return report_to_json(relaxed ? solve_factorized_relaxed(f, cfg) : solve_factorized(f, cfg)).dump();
      },
      py::arg("a1"), py::arg("a2"), py::arg("b"), py::arg("relaxed") = false, py::arg("epsilon") = 0.1,
      py::arg("mode") = "exact", py::arg("shots") = py::none(), py::arg("seed") = 0, py::arg("budget_scale") = 1.0);
}
