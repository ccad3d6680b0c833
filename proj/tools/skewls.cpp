#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "skewls/errors.hpp"
#include "skewls/io.hpp"

using namespace skewls;

namespace {

constexpr int kExitContract = 2;
constexpr int kExitResource = 3;

struct Common {
  std::string construction = "naive";
  int ancillas = 1;
  int l1 = 0, l2 = 0;
  std::vector<std::string> cost;
  std::optional<std::uint64_t> seed;
};

struct SolveOptions {
  std::string instance, out, residual_csv, plot;
  double epsilon = 0.1;
  std::string mode = "exact";
  std::optional<std::uint64_t> shots;
  double budget_scale = 1;
  double delta = 0.01;
  std::optional<double> norm_bound;
  bool exact_diagonal = false;
  bool relaxed = false;
  bool no_depth = false;
};

void add_construction(CLI::App* app, Common& c) {
  app->add_option("--construction", c.construction, "naive, ancilla or lattice")
      ->check(CLI::IsMember({"naive", "ancilla", "lattice"}));
  app->add_option("--ancillas", c.ancillas, "ancilla count s for --construction ancilla");
  app->add_option("--l1", c.l1, "lattice rows");
  app->add_option("--l2", c.l2, "lattice columns");
  app->add_option("--cost", c.cost, "gate cost override KIND=VALUE, repeatable");
}

void add_seed(CLI::App* app, Common& c) { app->add_option("--seed", c.seed, "master seed; random when absent"); }

Construction construction_of(const Common& c) {
  if (c.construction == "ancilla") return Construction::ancilla(c.ancillas);
  if (c.construction == "lattice") {
    if (c.l1 < 1 || c.l2 < 1) throw ContractError("--construction lattice needs --l1 and --l2 >= 1");
    return Construction::lattice(c.l1, c.l2);
  }
  return Construction::naive();
}

GateCostModel cost_of(const Common& c) {
  GateCostModel m;
  for (const auto& entry : c.cost) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ContractError("--cost expects KIND=VALUE, got '" + entry + "'");
    int value = 0;
    try {
      value = std::stoi(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw ContractError("--cost value is not an integer in '" + entry + "'");
    }
    m.set(gate_kind_from_name(entry.substr(0, eq)), value);
  }
  return m;
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << "\n";
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string complex_text(cplx z) {
  std::string im = number(z.imag());
  if (im[0] != '-') im = "+" + im;
  return number(z.real()) + im + "i";
}

int run_solve(const std::string& which, const SolveOptions& o, const Common& c) {
  SolveConfig cfg;
  cfg.epsilon = o.epsilon;
  if (o.mode != "exact" && o.mode != "sampled") throw ContractError("--mode must be exact or sampled");
  cfg.mode = o.mode == "exact" ? EstimationMode::Exact : EstimationMode::Sampled;
  cfg.shot_override = o.shots;
  cfg.budget_scale = o.budget_scale;
  cfg.delta = o.delta;
  cfg.norm_bound_x = o.norm_bound;
  cfg.exact_diagonal = o.exact_diagonal;
  cfg.construction = construction_of(c);
  cfg.collect_depth = !o.no_depth;
  cfg.seed = resolve_seed(c);

  const Json input = read_json_file(o.instance);
  SolveReport r;
  if (which == "solve-over") {
    r = solve_overdetermined(instance_from_json(input), cfg);
  } else if (which == "solve-under") {
    r = solve_underdetermined(instance_from_json(input), cfg);
  } else {
    const FactorizedInstance f = factorized_from_json(input);
    r = o.relaxed ? solve_factorized_relaxed(f, cfg) : solve_factorized(f, cfg);
  }
  Json j = report_to_json(r);
  j["delta"] = cfg.delta;
  j["mode"] = o.mode;
  emit(o.out, dump_json(j));

  std::ostringstream csv;
  csv << "problem,epsilon,lambda,residual_gap,within_epsilon\n"
      << r.problem << "," << number(r.epsilon) << "," << number(r.lambda_used) << "," << number(r.residual_gap) << ","
      << (r.residual_gap <= r.epsilon ? 1 : 0) << "\n";
  if (!o.residual_csv.empty()) write_text_file(o.residual_csv, csv.str());
  if (!o.plot.empty()) {
    std::ostringstream p;
    p << "index,re,im,abs\n";
    for (Eigen::Index i = 0; i < r.coefficients.size(); ++i) {
      p << i << "," << number(r.coefficients[i].real()) << "," << number(r.coefficients[i].imag()) << ","
        << number(std::abs(r.coefficients[i])) << "\n";
    }
    write_text_file(o.plot, p.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid solvers for skewed linear systems and Hadamard-test circuit transpilation"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags take precedence");
  app.require_subcommand(1);

  Common common;
  SolveOptions solve;
  std::vector<CLI::App*> solvers;
  for (const char* name : {"solve-over", "solve-under", "solve-factorized"}) {
    CLI::App* s = app.add_subcommand(name, std::string("run the ") + name + " solver on an instance file");
    s->add_option("--instance,-i", solve.instance, "instance JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--out,-o", solve.out, "report JSON path (stdout when absent)");
    s->add_option("--residual-csv", solve.residual_csv, "residual table CSV path");
    s->add_option("--emit-plot", solve.plot, "coefficient CSV path");
    s->add_option("--epsilon", solve.epsilon, "target error")->check(CLI::PositiveNumber);
    s->add_option("--mode", solve.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
    s->add_option("--shots", solve.shots, "shots per entry, replacing the budget");
    s->add_option("--budget-scale", solve.budget_scale, "multiplier on T")->check(CLI::PositiveNumber);
    s->add_option("--delta", solve.delta, "per-entry failure probability (reported)");
    s->add_option("--norm-bound", solve.norm_bound, "bound on |x*| or |alpha*| used in T");
    s->add_flag("--exact-diagonal", solve.exact_diagonal, "use |a_j|^2 for the Gram diagonal");
    s->add_flag("--no-depth", solve.no_depth, "skip per-circuit depth reports");
    if (std::string(name) == "solve-factorized") s->add_flag("--relaxed", solve.relaxed, "rank-deficient A1 variant");
    add_construction(s, common);
    add_seed(s, common);
    solvers.push_back(s);
  }

  std::string a_path, b_path, out;
  std::uint64_t shots = 0;
  CLI::App* overlap = app.add_subcommand("estimate-overlap", "estimate <0|A^dag B|0> with the Hadamard test");
  overlap->add_option("--a", a_path, "circuit A JSON")->required()->check(CLI::ExistingFile);
  overlap->add_option("--b", b_path, "circuit B JSON")->required()->check(CLI::ExistingFile);
  overlap->add_option("--shots", shots, "shots per quadrature; 0 is exact");
  overlap->add_option("--out,-o", out, "estimate JSON path");
  add_construction(overlap, common);
  add_seed(overlap, common);

  std::string circuit_path, graph = "complete", report_path;
  CLI::App* transpile = app.add_subcommand("transpile", "emit the controlled circuit for a connectivity graph");
  transpile->add_option("--circuit,-c", circuit_path, "circuit JSON")->required()->check(CLI::ExistingFile);
  transpile->add_option("--graph", graph, "complete, lattice or path")->check(CLI::IsMember({"complete", "lattice", "path"}));
  transpile->add_option("--out,-o", out, "controlled circuit JSON path");
  transpile->add_option("--report", report_path, "depth report JSON path");
  add_construction(transpile, common);

  CLI::App* depth = app.add_subcommand("depth-report", "measured depth, bound and lower bound of a controlled circuit");
  depth->add_option("--circuit,-c", circuit_path, "circuit JSON")->required()->check(CLI::ExistingFile);
  depth->add_option("--out,-o", out, "depth report JSON path");
  add_construction(depth, common);

  std::string instance_path, plot;
  int min_exp = 8, max_exp = 16, seeds = 30;
  CLI::App* bench = app.add_subcommand("scaling-bench", "Gram estimation error against shots on a log-log grid");
  bench->add_option("--instance,-i", instance_path, "instance JSON; a random 16x4 instance when absent");
  bench->add_option("--min-exp", min_exp, "smallest log2 shots");
  bench->add_option("--max-exp", max_exp, "largest log2 shots");
  bench->add_option("--seeds", seeds, "seeds per point")->check(CLI::PositiveNumber);
  bench->add_option("--out,-o", out, "table CSV path (stdout when absent)");
  bench->add_option("--emit-plot", plot, "same table, for plotting");
  add_seed(bench, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitContract;
  }

  try {
    for (CLI::App* s : solvers) {
      if (s->parsed()) return run_solve(s->get_name(), solve, common);
    }
    if (overlap->parsed()) {
      const Circuit a = circuit_from_json(read_json_file(a_path), a_path);
      const Circuit b = circuit_from_json(read_json_file(b_path), b_path);
      const std::uint64_t seed = shots == 0 && !common.seed ? 0 : resolve_seed(common);
      const OverlapEstimate e = estimate_overlap(a, b, shots, seed, construction_of(common));
      std::cout << complex_text(e.value) << "\n";
      if (!out.empty()) write_text_file(out, dump_json(overlap_to_json(e)));
      return 0;
    }
    if (transpile->parsed() || depth->parsed()) {
      const Circuit c = circuit_from_json(read_json_file(circuit_path), circuit_path);
      Construction how = construction_of(common);
      if (transpile->parsed()) {
        if (graph == "lattice" && how.kind != ConstructionKind::Lattice) {
          if (common.l1 < 1 || common.l2 < 1) throw ContractError("--graph lattice needs --l1 and --l2 >= 1");
          how = Construction::lattice(common.l1, common.l2);
        }
        if (graph == "lattice" && c.width + 1 > how.l1 * how.l2) {
          throw ContractError("circuit width " + std::to_string(c.width) + " plus the control exceeds the " +
                              std::to_string(how.l1) + "x" + std::to_string(how.l2) + " lattice");
        }
        // a path is the n x 1 lattice
        if (graph == "path") how = Construction::lattice(c.width + 1, 1);
      }
      const GateCostModel cost = cost_of(common);
      const DepthReport r = depth_report(c, how, cost);
      if (transpile->parsed()) {
        emit(out, dump_json(circuit_to_json(controlled(c, how, cost))));
        if (!report_path.empty()) write_text_file(report_path, dump_json(depth_report_to_json(r)));
        return 0;
      }
      std::cout << "construction: " << r.construction << "\n"
                << "measured depth: " << r.measured_depth << "\n"
                << "bound: " << r.bound_formula;
      if (r.bound_value) std::cout << " = " << *r.bound_value;
      std::cout << "\nlower bound: " << r.lower_bound << "\n";
      if (!out.empty()) write_text_file(out, dump_json(depth_report_to_json(r)));
      return 0;
    }
    if (bench->parsed()) {
      if (min_exp > max_exp) throw ContractError("--min-exp exceeds --max-exp");
      const std::uint64_t seed = resolve_seed(common);
      std::vector<ColumnOracle> columns;
      if (!instance_path.empty()) {
        columns = instance_from_json(read_json_file(instance_path)).columns;
      } else {
        std::mt19937_64 rng(derive_seed(seed, "bench/instance"));
        std::normal_distribution<double> g;
        Matrix a(16, 4);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = cplx(g(rng), g(rng));
        columns = instance_from_matrix(a, Vector::Ones(16)).columns;
      }
      std::vector<int> exps;
      for (int e = min_exp; e <= max_exp; ++e) exps.push_back(e);
      const auto rows = gram_scaling_sweep(columns, exps, seeds, seed);
      std::ostringstream csv;
      csv << "shots,median_error,log2_shots,log2_median_error\n";
      for (const auto& r : rows) {
        csv << r.shots << "," << number(r.median_error) << "," << number(std::log2(static_cast<double>(r.shots))) << ","
            << number(std::log2(r.median_error)) << "\n";
      }
      emit(out, csv.str());
      if (!plot.empty()) write_text_file(plot, csv.str());
      std::cerr << "slope: " << number(loglog_slope(rows)) << "\n";
      return 0;
    }
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
