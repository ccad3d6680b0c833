#include "skewls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skewls/errors.hpp"

namespace skewls {

namespace {

int check_widths(const std::vector<ColumnOracle>& columns, const char* who) {
  if (columns.empty()) throw ContractError(std::string(who) + ": no columns");
  const int w = columns[0].prep.width;
  for (const auto& c : columns) {
    if (c.prep.width != w) throw ContractError(std::string(who) + ": column widths differ");
    if (!(c.norm >= 0) || !std::isfinite(c.norm)) throw ContractError(std::string(who) + ": invalid column norm");
  }
  return w;
}

void check_nonzero(const std::vector<ColumnOracle>& columns, const char* who) {
  for (const auto& c : columns) {
    if (c.norm == 0) throw DomainError(std::string(who) + ": all-zero column");
  }
}

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t shots_from_budget(double gamma, double t) {
  const double shots = std::ceil(gamma * gamma * t);
  if (!std::isfinite(shots) || shots > 4.0e18) return kSaturated;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(shots));
}

// Shots per entry actually spent: 0 in exact mode, the override if given.
std::uint64_t shots_to_run(const SolveConfig& cfg, std::uint64_t budget) {
  if (cfg.mode == EstimationMode::Exact) return 0;
  if (cfg.shot_override) return *cfg.shot_override;
  if (budget == kSaturated) throw ResourceError("shot budget per entry exceeds 4e18; set a shot override or budget scale");
  return budget;
}

std::vector<double> norms_of(const std::vector<ColumnOracle>& columns) {
  std::vector<double> out;
  for (const auto& c : columns) out.push_back(c.norm);
  return out;
}

int pow2_width(Eigen::Index rows) {
  int w = 0;
  while ((Eigen::Index{1} << w) < rows) ++w;
  return w;
}

// Records the per-task seeds of one estimator and the depth of its circuit.
struct Recorder {
  SolveReport& report;
  const SolveConfig& cfg;

  void task(const std::string& label, const Circuit& a, const Circuit& b) {
    if (cfg.mode == EstimationMode::Sampled) {
      report.seeds[label + "/re"] = derive_seed(cfg.seed, label + "/re");
      report.seeds[label + "/im"] = derive_seed(cfg.seed, label + "/im");
    }
    if (cfg.collect_depth) {
      report.depth_stats.emplace_back(label, depth_report(overlap_circuit(a, b), cfg.construction));
    }
  }
};

void record_gram(Recorder& rec, const std::vector<ColumnOracle>& cols, const std::string& label) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t k = j; k < cols.size(); ++k) {
      if (j == k && rec.cfg.exact_diagonal) continue;
      rec.task(label + "/" + std::to_string(j) + "/" + std::to_string(k), cols[j].prep, cols[k].prep);
    }
  }
}

void record_rhs(Recorder& rec, const std::vector<ColumnOracle>& cols, const ColumnOracle& b, const std::string& label) {
  for (std::size_t j = 0; j < cols.size(); ++j) rec.task(label + "/" + std::to_string(j), cols[j].prep, b.prep);
}

std::uint64_t entry_count(std::size_t m, bool exact_diagonal) {
  return static_cast<std::uint64_t>(m * (m + 1) / 2 - (exact_diagonal ? m : 0));
}

}  // namespace

int LinearSystemInstance::width() const { return columns.empty() ? 0 : columns[0].prep.width; }

Vector prepared_state(const ColumnOracle& o) { return apply(o.prep, StateVector::zeros(o.prep.width)).amplitudes; }

Matrix reconstruct_columns(const std::vector<ColumnOracle>& columns) {
  const int w = check_widths(columns, "reconstruct_columns");
  Matrix a(Eigen::Index{1} << w, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = columns[j].norm * prepared_state(columns[j]);
  return a;
}

Matrix reconstruct_factor_right(const std::vector<ColumnOracle>& rows) {
  // Row j of A2 is |v_j| <v_j|.
  return reconstruct_columns(rows).adjoint();
}

InstanceMetrics metrics_of(const Matrix& a) {
  const SpectralMetrics s = spectral_metrics(a);
  return {s.spectral_norm, s.pinv_norm, s.condition_number, s.frobenius_norm};
}

InstanceMetrics instance_metrics(const LinearSystemInstance& inst) {
  if (inst.metrics) return *inst.metrics;
  return metrics_of(reconstruct_columns(inst.columns));
}

ColumnOracle oracle_from_vector(const Vector& v) {
  if (v.size() == 0) throw ContractError("oracle_from_vector: empty vector");
  if (!all_finite(v)) throw ContractError("oracle_from_vector: non-finite entries");
  const int w = pow2_width(v.size());
  Vector padded = Vector::Zero(Eigen::Index{1} << w);
  padded.head(v.size()) = v;
  ColumnOracle o;
  o.norm = padded.norm();
  if (o.norm == 0) {
    o.prep = Circuit(w);
    return o;
  }
  o.prep = synthesize_state_prep(padded / o.norm, w);
  return o;
}

LinearSystemInstance instance_from_matrix(const Matrix& a, const Vector& rhs) {
  if (a.rows() == 0 || a.cols() == 0) throw ContractError("instance_from_matrix: empty matrix");
  LinearSystemInstance inst;
  for (Eigen::Index j = 0; j < a.cols(); ++j) inst.columns.push_back(oracle_from_vector(a.col(j)));
  if (rhs.size() == a.rows()) {
    inst.rhs_oracle = oracle_from_vector(rhs);
  } else if (rhs.size() == a.cols()) {
    if (!all_finite(rhs)) throw ContractError("instance_from_matrix: non-finite rhs");
    inst.rhs_vector = rhs;
  } else {
    throw ContractError("instance_from_matrix: rhs length matches neither rows nor columns");
  }
  return inst;
}

FactorizedInstance factorized_from_matrices(const Matrix& a1, const Matrix& a2, const Vector& b) {
  if (a1.cols() != a2.rows() || a1.cols() == 0) throw ContractError("factorized_from_matrices: inner dimensions differ");
  if (b.size() != a1.rows()) throw ContractError("factorized_from_matrices: rhs length differs from rows of A1");
  FactorizedInstance f;
  for (Eigen::Index j = 0; j < a1.cols(); ++j) f.left.push_back(oracle_from_vector(a1.col(j)));
  for (Eigen::Index j = 0; j < a2.rows(); ++j) f.right.push_back(oracle_from_vector(a2.row(j).adjoint()));
  f.rhs = oracle_from_vector(b);
  return f;
}

GramEstimate estimate_gram(const std::vector<ColumnOracle>& columns, std::uint64_t shots_per_entry, std::uint64_t seed,
                           EstimationMode mode, bool exact_diagonal, const Construction& how,
                           const std::string& label) {
  check_widths(columns, "estimate_gram");
  const std::uint64_t shots = mode == EstimationMode::Exact ? 0 : shots_per_entry;
  if (mode == EstimationMode::Sampled && shots == 0) throw ContractError("estimate_gram: sampled mode needs shots");
  const auto m = static_cast<Eigen::Index>(columns.size());
  Matrix v(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) {
      const double scale = columns[j].norm * columns[k].norm;
      if (j == k && exact_diagonal) {
        v(j, j) = scale;
        continue;
      }
      const auto est = estimate_overlap(columns[j].prep, columns[k].prep, shots, seed, how,
                                        label + "/" + std::to_string(j) + "/" + std::to_string(k));
      v(j, k) = scale * est.value;
      v(k, j) = std::conj(v(j, k));
    }
  }
  GramEstimate g;
  g.matrix = (v + v.adjoint()) / 2.0;
  g.shots_per_entry = shots;
  double gamma = 0;
  for (const auto& c : columns) gamma = std::max(gamma, c.norm * c.norm);
  g.gamma = gamma;
  return g;
}

Vector estimate_rhs(const std::vector<ColumnOracle>& columns, const ColumnOracle& b, std::uint64_t shots_per_entry,
                    std::uint64_t seed, EstimationMode mode, const Construction& how, const std::string& label) {
  const int w = check_widths(columns, "estimate_rhs");
  if (b.prep.width != w) throw ContractError("estimate_rhs: rhs width differs from columns");
  const std::uint64_t shots = mode == EstimationMode::Exact ? 0 : shots_per_entry;
  if (mode == EstimationMode::Sampled && shots == 0) throw ContractError("estimate_rhs: sampled mode needs shots");
  Vector q(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto est = estimate_overlap(columns[j].prep, b.prep, shots, seed, how, label + "/" + std::to_string(j));
    q[static_cast<Eigen::Index>(j)] = columns[j].norm * b.norm * est.value;
  }
  return q;
}

SampleBudget sample_budget_overdetermined(const InstanceMetrics& m, int columns, const std::vector<double>& column_norms,
                                          double b_norm, double epsilon, double norm_bound_x, double budget_scale) {
  if (!(epsilon > 0)) throw ContractError("epsilon must be positive");
  if (!(budget_scale > 0)) throw ContractError("budget_scale must be positive");
  const double a = m.spectral_norm, ai = m.pinv_norm, k = m.condition_number;
  SampleBudget s;
  s.lambda = epsilon / (2 * a * a * std::pow(ai, 4) * b_norm);
  const double inner = a * (norm_bound_x + 1) + epsilon;
  s.t = budget_scale * columns * std::pow(ai, 4) * std::pow(k, 4) * b_norm * b_norm * inner * inner / std::pow(epsilon, 4);
  for (double n : column_norms) s.gamma = std::max({s.gamma, n * b_norm, n * n});
  s.shots_per_entry = shots_from_budget(s.gamma, s.t);
  return s;
}

SampleBudget sample_budget_underdetermined(const InstanceMetrics& m, int columns,
                                           const std::vector<double>& column_norms, double c_norm, double epsilon,
                                           double alpha_bound, double budget_scale) {
  if (!(epsilon > 0)) throw ContractError("epsilon must be positive");
  if (!(budget_scale > 0)) throw ContractError("budget_scale must be positive");
  const double a = m.spectral_norm, ai = m.pinv_norm, k = m.condition_number;
  SampleBudget s;
  s.lambda = epsilon / (2 * std::pow(ai, 8) * std::pow(a, 4) * c_norm);
  const double inner = a * a * alpha_bound + epsilon + c_norm;
  s.t = budget_scale * (columns * std::pow(k, 12) * std::pow(ai, 4) * c_norm * c_norm * inner * inner / std::pow(epsilon, 4) +
                        columns / std::pow(a, 4));
  for (double n : column_norms) s.gamma = std::max(s.gamma, n * n);
  s.shots_per_entry = shots_from_budget(s.gamma, s.t);
  return s;
}

SolveReport solve_overdetermined(const LinearSystemInstance& inst, const SolveConfig& cfg) {
  if (!inst.rhs_oracle) throw ContractError("solve_overdetermined: rhs must be an oracle");
  const int w = check_widths(inst.columns, "solve_overdetermined");
  if (inst.rhs_oracle->prep.width != w) throw ContractError("solve_overdetermined: rhs width differs from columns");
  check_nonzero(inst.columns, "solve_overdetermined");
  const ColumnOracle& b = *inst.rhs_oracle;
  const int m = inst.size();

  SolveReport r;
  r.problem = "overdetermined";
  r.epsilon = cfg.epsilon;
  r.seeds["master"] = cfg.seed;
  if (b.norm == 0) {
    r.coefficients = Vector::Zero(m);
    r.residual_gap = residual_gap(inst, r.coefficients);
    return r;
  }
  const InstanceMetrics met = instance_metrics(inst);
  double x_bound = 0;
  if (cfg.norm_bound_x) {
    x_bound = *cfg.norm_bound_x;
  } else {
    // |V^+| |q| with q = A^dag b from the dense view.
    const Matrix a = reconstruct_columns(inst.columns);
    x_bound = met.pinv_norm * met.pinv_norm * (a.adjoint() * prepared_state(b) * b.norm).norm();
  }
  const SampleBudget bud =
      sample_budget_overdetermined(met, m, norms_of(inst.columns), b.norm, cfg.epsilon, x_bound, cfg.budget_scale);
  const std::uint64_t shots = shots_to_run(cfg, bud.shots_per_entry);

  const GramEstimate g = estimate_gram(inst.columns, shots, cfg.seed, cfg.mode, cfg.exact_diagonal, cfg.construction, "gram");
  const Vector q = estimate_rhs(inst.columns, b, shots, cfg.seed, cfg.mode, cfg.construction, "rhs");
  r.coefficients = solve_shifted(g.matrix, q, bud.lambda);
  r.lambda_used = bud.lambda;
  r.budget = {{"T", bud.t}, {"Gamma1", bud.gamma}, {"norm_bound_x", x_bound}, {"shots_per_entry_budget", static_cast<double>(bud.shots_per_entry)}};
  r.shots_used["gram"] = shots * entry_count(inst.columns.size(), cfg.exact_diagonal) * 2;
  r.shots_used["rhs"] = shots * static_cast<std::uint64_t>(m) * 2;
  r.shots_used["per_entry"] = shots;
  Recorder rec{r, cfg};
  record_gram(rec, inst.columns, "gram");
  record_rhs(rec, inst.columns, b, "rhs");
  r.residual_gap = residual_gap(inst, r.coefficients);
  return r;
}

SolveReport solve_underdetermined(const LinearSystemInstance& inst, const SolveConfig& cfg) {
  if (!inst.rhs_vector) throw ContractError("solve_underdetermined: rhs must be a classical vector");
  check_widths(inst.columns, "solve_underdetermined");
  check_nonzero(inst.columns, "solve_underdetermined");
  const Vector& c = *inst.rhs_vector;
  const int m = inst.size();
  if (c.size() != m) throw ContractError("solve_underdetermined: rhs length differs from column count");

  SolveReport r;
  r.problem = "underdetermined";
  r.epsilon = cfg.epsilon;
  r.seeds["master"] = cfg.seed;
  if (c.norm() == 0) {
    r.coefficients = Vector::Zero(m);
    r.residual_gap = residual_gap(inst, r.coefficients);
    return r;
  }
  const InstanceMetrics met = instance_metrics(inst);
  const double alpha_bound = cfg.norm_bound_x.value_or(std::pow(met.pinv_norm, 4) * met.spectral_norm * met.spectral_norm * c.norm());
  const SampleBudget bud =
      sample_budget_underdetermined(met, m, norms_of(inst.columns), c.norm(), cfg.epsilon, alpha_bound, cfg.budget_scale);
  const std::uint64_t shots = shots_to_run(cfg, bud.shots_per_entry);

  const GramEstimate g = estimate_gram(inst.columns, shots, cfg.seed, cfg.mode, cfg.exact_diagonal, cfg.construction, "gram");
  const Matrix q = g.matrix * g.matrix;
  const Vector alpha = solve_shifted(q, g.matrix * c, bud.lambda);
  r.coefficients.resize(m);
  for (int j = 0; j < m; ++j) r.coefficients[j] = alpha[j] * inst.columns[static_cast<std::size_t>(j)].norm;
  r.lambda_used = bud.lambda;
  r.budget = {{"T", bud.t}, {"Gamma2", bud.gamma}, {"alpha_bound", alpha_bound}, {"shots_per_entry_budget", static_cast<double>(bud.shots_per_entry)}};
  r.shots_used["gram"] = shots * entry_count(inst.columns.size(), cfg.exact_diagonal) * 2;
  r.shots_used["per_entry"] = shots;
  Recorder rec{r, cfg};
  record_gram(rec, inst.columns, "gram");
  r.residual_gap = residual_gap(inst, r.coefficients);
  return r;
}

namespace {

struct FactorDense {
  Matrix a1, a2, a;
  Vector b;
};

FactorDense dense(const FactorizedInstance& f) {
  FactorDense d;
  d.a1 = reconstruct_columns(f.left);
  d.a2 = reconstruct_factor_right(f.right);
  if (d.a1.cols() != d.a2.rows()) throw ContractError("factorized instance: factor ranks differ");
  if (f.rhs.prep.width != f.left[0].prep.width) throw ContractError("factorized instance: rhs width differs from A1");
  d.a = d.a1 * d.a2;
  d.b = f.rhs.norm * prepared_state(f.rhs);
  return d;
}

SolveReport solve_factorized_impl(const FactorizedInstance& f, const SolveConfig& cfg, bool relaxed) {
  if (!(cfg.epsilon > 0)) throw ContractError("epsilon must be positive");
  if (!(cfg.budget_scale > 0)) throw ContractError("budget_scale must be positive");
  check_widths(f.left, "solve_factorized");
  check_widths(f.right, "solve_factorized");
  check_nonzero(f.left, "solve_factorized");
  check_nonzero(f.right, "solve_factorized");
  if (f.left.size() != f.right.size()) throw ContractError("solve_factorized: factor ranks differ");
  const FactorDense d = dense(f);
  const int rank = static_cast<int>(f.left.size());

  SolveReport r;
  r.problem = relaxed ? "factorized-relaxed" : "factorized";
  r.epsilon = cfg.epsilon;
  r.seeds["master"] = cfg.seed;
  if (f.rhs.norm == 0) {
    r.coefficients = Vector::Zero(rank);
    r.residual_gap = residual_gap(f, r.coefficients);
    return r;
  }

  const InstanceMetrics m1 = metrics_of(d.a1), m2 = metrics_of(d.a2);
  const double a_norm = metrics_of(d.a).spectral_norm;
  const double eps = cfg.epsilon;
  const Matrix v1 = d.a1.adjoint() * d.a1;
  const Matrix q2 = d.a2 * d.a2.adjoint();
  const Vector y_star = pseudo_inverse(v1) * (d.a1.adjoint() * d.b);
  const double y_bound = y_star.norm();
  const double alpha_bound = cfg.norm_bound_x.value_or((pseudo_inverse(q2) * y_star).norm());
  const double q_inv = std::pow(m2.pinv_norm, 2), v_inv = std::pow(m1.pinv_norm, 2);

  double gamma1 = 0, gamma2 = 0;
  for (const auto& u : f.left) gamma1 = std::max({gamma1, u.norm * u.norm, u.norm * f.rhs.norm});
  for (const auto& v : f.right) gamma2 = std::max(gamma2, v.norm * v.norm);
  const double gamma = std::max(gamma1, gamma2);

  double t1 = 0, t2 = 0, lambda = 0;
  if (!relaxed) {
    t2 = rank * a_norm * a_norm * q_inv * q_inv * (1 + alpha_bound * alpha_bound) / (eps * eps);
    t1 = rank * a_norm * a_norm * v_inv * v_inv * q_inv * q_inv * (1 + y_bound * y_bound) * (1 + alpha_bound * alpha_bound) /
         (eps * eps);
  } else {
    const double eps1 = eps;
    lambda = eps1 / (2 * std::pow(m1.pinv_norm, 4) * std::pow(m1.spectral_norm, 2) * f.rhs.norm);
    const double inner = m1.spectral_norm * (y_bound + 1) + eps1;
    t1 = rank * std::pow(m1.pinv_norm, 8) * std::pow(m1.spectral_norm, 2) * f.rhs.norm * f.rhs.norm * inner * inner /
         std::pow(eps1, 4);
    t2 = rank * std::pow(m1.spectral_norm, 2) * std::pow(m2.spectral_norm, 2) * std::pow(m2.pinv_norm, 4) *
         std::pow(1 + alpha_bound, 2) / eps;
  }
  t1 *= cfg.budget_scale;
  t2 *= cfg.budget_scale;
  const std::uint64_t shots1 = shots_to_run(cfg, shots_from_budget(gamma, t1));
  const std::uint64_t shots2 = shots_to_run(cfg, shots_from_budget(gamma, t2));

  const GramEstimate g1 = estimate_gram(f.left, shots1, cfg.seed, cfg.mode, cfg.exact_diagonal, cfg.construction, "gram_a1");
  const Vector q = estimate_rhs(f.left, f.rhs, shots1, cfg.seed, cfg.mode, cfg.construction, "rhs_a1");
  const Vector y = solve_shifted(g1.matrix, q, lambda);
  const GramEstimate g2 = estimate_gram(f.right, shots2, cfg.seed, cfg.mode, cfg.exact_diagonal, cfg.construction, "gram_a2");
  const Vector alpha = solve_shifted(g2.matrix, y, 0);

  r.coefficients.resize(rank);
  for (int j = 0; j < rank; ++j) r.coefficients[j] = alpha[j] * f.right[static_cast<std::size_t>(j)].norm;
  r.lambda_used = lambda;
  r.budget = {{"T1", t1}, {"T2", t2}, {"Gamma", gamma}, {"y_bound", y_bound}, {"alpha_bound", alpha_bound}};
  r.shots_used["gram_a1"] = shots1 * entry_count(f.left.size(), cfg.exact_diagonal) * 2;
  r.shots_used["rhs_a1"] = shots1 * static_cast<std::uint64_t>(rank) * 2;
  r.shots_used["gram_a2"] = shots2 * entry_count(f.right.size(), cfg.exact_diagonal) * 2;
  Recorder rec{r, cfg};
  record_gram(rec, f.left, "gram_a1");
  record_rhs(rec, f.left, f.rhs, "rhs_a1");
  record_gram(rec, f.right, "gram_a2");
  r.residual_gap = residual_gap(f, r.coefficients);
  return r;
}

}  // namespace

SolveReport solve_factorized(const FactorizedInstance& inst, const SolveConfig& cfg) {
  return solve_factorized_impl(inst, cfg, false);
}

SolveReport solve_factorized_relaxed(const FactorizedInstance& inst, const SolveConfig& cfg) {
  return solve_factorized_impl(inst, cfg, true);
}

double residual_gap(const LinearSystemInstance& inst, const Vector& coefficients) {
  const Matrix a = reconstruct_columns(inst.columns);
  if (coefficients.size() != a.cols()) throw ContractError("residual_gap: coefficient count differs from columns");
  if (inst.rhs_oracle) {
    if (inst.rhs_oracle->prep.width != inst.width()) throw ContractError("residual_gap: rhs width differs");
    const Vector b = inst.rhs_oracle->norm * prepared_state(*inst.rhs_oracle);
    const Vector best = a * (pseudo_inverse(a) * b);
    return (a * coefficients - b).norm() - (best - b).norm();
  }
  if (!inst.rhs_vector) throw ContractError("residual_gap: instance has no rhs");
  const Vector& c = *inst.rhs_vector;
  if (c.size() != a.cols()) throw ContractError("residual_gap: rhs length differs from column count");
  Vector y = Vector::Zero(a.rows());
  for (Eigen::Index j = 0; j < a.cols(); ++j) y += coefficients[j] * prepared_state(inst.columns[static_cast<std::size_t>(j)]);
  const Matrix v = a.adjoint() * a;
  const Vector best = v * (pseudo_inverse(v) * c);
  return (a.adjoint() * y - c).norm() - (best - c).norm();
}

double residual_gap(const FactorizedInstance& inst, const Vector& coefficients) {
  const FactorDense d = dense(inst);
  if (coefficients.size() != static_cast<Eigen::Index>(inst.right.size())) {
    throw ContractError("residual_gap: coefficient count differs from rank");
  }
  Vector x = Vector::Zero(d.a2.cols());
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) x += coefficients[j] * prepared_state(inst.right[static_cast<std::size_t>(j)]);
  const Vector best = d.a * (pseudo_inverse(d.a) * d.b);
  return (d.a * x - d.b).norm() - (best - d.b).norm();
}

ScalarEstimate inner_product_with_state(const Vector& s, const std::vector<ColumnOracle>& columns, const Circuit& v,
                                        std::uint64_t shots, std::uint64_t seed) {
  const int w = check_widths(columns, "inner_product_with_state");
  if (v.width != w) throw ContractError("inner_product_with_state: state width differs from columns");
  if (s.size() != static_cast<Eigen::Index>(columns.size())) throw ContractError("inner_product_with_state: coefficient count");
  ScalarEstimate out{0, 0};
  double var = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto si = s[static_cast<Eigen::Index>(i)];
    const auto est = estimate_overlap(v, columns[i].prep, shots, seed, Construction::naive(), "inner/" + std::to_string(i));
    out.value += si * est.value;
    var += std::norm(si) * est.standard_error * est.standard_error;
  }
  out.standard_error = std::sqrt(var);
  return out;
}

void ObservableSpec::check() const {
  if (terms.empty()) throw ContractError("observable: no terms");
  const int w = terms[0].second.width;
  for (const auto& [g, h] : terms) {
    if (!(g > 0) || g > delta_h) throw ContractError("observable: coefficients must lie in (0, delta_h]");
    if (h.width != w) throw ContractError("observable: term widths differ");
    validate(h);
  }
}

ObservableEstimate observable_expectation(const Vector& s, const std::vector<ColumnOracle>& columns,
                                          const ObservableSpec& obs, std::uint64_t shots, std::uint64_t seed) {
  const int w = check_widths(columns, "observable_expectation");
  obs.check();
  if (obs.terms[0].second.width != w) throw ContractError("observable_expectation: observable width differs");
  if (s.size() != static_cast<Eigen::Index>(columns.size())) throw ContractError("observable_expectation: coefficient count");
  cplx total = 0;
  double var = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = 0; j < obs.terms.size(); ++j) {
      for (std::size_t k = 0; k < columns.size(); ++k) {
        const cplx weight = std::conj(s[static_cast<Eigen::Index>(i)]) * obs.terms[j].first * s[static_cast<Eigen::Index>(k)];
        if (weight == cplx(0)) continue;
        const Circuit hk = compose(columns[k].prep, obs.terms[j].second);
        const auto est = estimate_overlap(columns[i].prep, hk, shots, seed, Construction::naive(),
                                          "observable/" + std::to_string(i) + "/" + std::to_string(j) + "/" +
                                              std::to_string(k));
        total += weight * est.value;
        var += std::norm(weight) * est.standard_error * est.standard_error;
      }
    }
  }
  return {total.real(), total.imag(), std::sqrt(var)};
}

std::vector<ScalingRow> gram_scaling_sweep(const std::vector<ColumnOracle>& columns, const std::vector<int>& exponents,
                                           int seeds_per_point, std::uint64_t seed) {
  if (seeds_per_point < 1) throw ContractError("gram_scaling_sweep: need at least one seed per point");
  const GramEstimate exact = estimate_gram(columns, 0, 0, EstimationMode::Exact);
  std::vector<ScalingRow> rows;
  for (int e : exponents) {
    if (e < 0 || e > 40) throw ContractError("gram_scaling_sweep: shot exponent out of range");
    ScalingRow row;
    row.shots = std::uint64_t{1} << e;
    std::vector<double> errs;
    for (int i = 0; i < seeds_per_point; ++i) {
      const std::uint64_t s = derive_seed(seed, "sweep/" + std::to_string(e) + "/" + std::to_string(i));
      const GramEstimate g = estimate_gram(columns, row.shots, s, EstimationMode::Sampled);
      errs.push_back((g.matrix - exact.matrix).operatorNorm());
    }
    std::sort(errs.begin(), errs.end());
    const std::size_t n = errs.size();
    row.median_error = n % 2 ? errs[n / 2] : (errs[n / 2 - 1] + errs[n / 2]) / 2;
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 2) throw ContractError("loglog_slope: need at least two points");
  double mx = 0, my = 0;
  for (const auto& r : rows) {
    mx += std::log(static_cast<double>(r.shots));
    my += std::log(r.median_error);
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0, sxx = 0;
  for (const auto& r : rows) {
    const double dx = std::log(static_cast<double>(r.shots)) - mx;
    sxy += dx * (std::log(r.median_error) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace skewls
