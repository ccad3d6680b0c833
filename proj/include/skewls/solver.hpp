#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewls/hadamard.hpp"
#include "skewls/numerics.hpp"
#include "skewls/transpiler.hpp"

namespace skewls {

// prep|0> is the unit state a_j / |a_j|; norm is |a_j|.
struct ColumnOracle {
  Circuit prep;
  double norm = 0;
};

struct InstanceMetrics {
  double spectral_norm = 0;
  double pinv_norm = 0;
  double condition_number = 0;
  double frobenius_norm = 0;
};

// Columns of A with either an oracle right-hand side b (least squares) or a
// classical vector c (minimum residual of A^dag y = c).
struct LinearSystemInstance {
  std::vector<ColumnOracle> columns;
  std::optional<ColumnOracle> rhs_oracle;
  std::optional<Vector> rhs_vector;
  std::optional<InstanceMetrics> metrics;  // computed from the columns when absent

  int width() const;
  int size() const { return static_cast<int>(columns.size()); }
};

// A = A1 A2 with A1 = sum_j |u_j| |u_j><j| and A2 = sum_j |v_j| |j><v_j|.
struct FactorizedInstance {
  std::vector<ColumnOracle> left;   // u_j, width log N
  std::vector<ColumnOracle> right;  // v_j, width log M
  ColumnOracle rhs;                 // b
};

enum class EstimationMode { Exact, Sampled };

struct SolveConfig {
  double epsilon = 0.1;
  EstimationMode mode = EstimationMode::Exact;
  std::optional<std::uint64_t> shot_override;
  double budget_scale = 1.0;
  std::uint64_t seed = 0;
  double delta = 0.01;                  // per-entry failure probability, reported only
  std::optional<double> norm_bound_x;   // |x*| or |alpha*| bound used in T
  bool exact_diagonal = false;
  Construction construction = Construction::naive();
  bool collect_depth = true;
};

struct GramEstimate {
  Matrix matrix;
  std::uint64_t shots_per_entry = 0;
  double gamma = 0;
};

struct SampleBudget {
  double lambda = 0;
  double t = 0;
  double gamma = 0;
  std::uint64_t shots_per_entry = 0;
};

struct SolveReport {
  std::string problem;
  Vector coefficients;
  double residual_gap = 0;
  double lambda_used = 0;
  double epsilon = 0;
  std::map<std::string, double> budget;              // T, Gamma, ... per stage
  std::map<std::string, std::uint64_t> shots_used;   // per estimator, per quadrature
  std::map<std::string, std::uint64_t> seeds;        // master and derived task seeds
  std::vector<std::pair<std::string, DepthReport>> depth_stats;
};

// Dense views of the oracles.
Vector prepared_state(const ColumnOracle& o);
Matrix reconstruct_columns(const std::vector<ColumnOracle>& columns);
InstanceMetrics metrics_of(const Matrix& a);
InstanceMetrics instance_metrics(const LinearSystemInstance& inst);

// Builds oracles from dense data; the row count is zero-padded to a power of two.
ColumnOracle oracle_from_vector(const Vector& v);
LinearSystemInstance instance_from_matrix(const Matrix& a, const Vector& rhs);
FactorizedInstance factorized_from_matrices(const Matrix& a1, const Matrix& a2, const Vector& b);
Matrix reconstruct_factor_right(const std::vector<ColumnOracle>& rows);

// shots = 0 in exact mode. Entries (j, k) with j <= k are estimated, the rest mirrored.
GramEstimate estimate_gram(const std::vector<ColumnOracle>& columns, std::uint64_t shots_per_entry, std::uint64_t seed,
                           EstimationMode mode, bool exact_diagonal = false,
                           const Construction& how = Construction::naive(), const std::string& label = "gram");
Vector estimate_rhs(const std::vector<ColumnOracle>& columns, const ColumnOracle& b, std::uint64_t shots_per_entry,
                    std::uint64_t seed, EstimationMode mode, const Construction& how = Construction::naive(),
                    const std::string& label = "rhs");

SampleBudget sample_budget_overdetermined(const InstanceMetrics& m, int columns, const std::vector<double>& column_norms,
                                          double b_norm, double epsilon, double norm_bound_x, double budget_scale = 1);
SampleBudget sample_budget_underdetermined(const InstanceMetrics& m, int columns,
                                           const std::vector<double>& column_norms, double c_norm, double epsilon,
                                           double alpha_bound, double budget_scale = 1);

SolveReport solve_overdetermined(const LinearSystemInstance& inst, const SolveConfig& cfg);
SolveReport solve_underdetermined(const LinearSystemInstance& inst, const SolveConfig& cfg);
SolveReport solve_factorized(const FactorizedInstance& inst, const SolveConfig& cfg);
SolveReport solve_factorized_relaxed(const FactorizedInstance& inst, const SolveConfig& cfg);

// |A sol - b| - min |A x - b| for an oracle rhs; |A^dag y - c| - min for a
// vector rhs, with y = sum_j sol_j |a_j>.
double residual_gap(const LinearSystemInstance& inst, const Vector& coefficients);
// |A1 A2 x - b| - min with x = sum_j s_j |v_j>.
double residual_gap(const FactorizedInstance& inst, const Vector& coefficients);

struct ScalarEstimate {
  cplx value;
  double standard_error = 0;  // 0 in exact mode
};

// <v|y> with y = sum_i s_i |a_i>. shots = 0 is exact.
ScalarEstimate inner_product_with_state(const Vector& s, const std::vector<ColumnOracle>& columns, const Circuit& v,
                                        std::uint64_t shots, std::uint64_t seed);

struct ObservableSpec {
  std::vector<std::pair<double, Circuit>> terms;  // gamma_k, H_k
  double delta_h = 1;

  void check() const;
  int k_h() const { return static_cast<int>(terms.size()); }
};

// y^dag H y; value holds the real part, the imaginary residue is reported.
struct ObservableEstimate {
  double value = 0;
  double imaginary_residue = 0;
  double standard_error = 0;
};
ObservableEstimate observable_expectation(const Vector& s, const std::vector<ColumnOracle>& columns,
                                          const ObservableSpec& obs, std::uint64_t shots, std::uint64_t seed);

struct ScalingRow {
  std::uint64_t shots = 0;
  double median_error = 0;  // median over seeds of |V_hat - V| (spectral norm)
};

// Gram estimation error against shots 2^e for each exponent, seeds
// derive_seed(seed, "sweep/<e>/<i>") for i < seeds_per_point.
std::vector<ScalingRow> gram_scaling_sweep(const std::vector<ColumnOracle>& columns, const std::vector<int>& exponents,
                                           int seeds_per_point, std::uint64_t seed);
// Least-squares slope of log(median_error) against log(shots).
double loglog_slope(const std::vector<ScalingRow>& rows);

}  // namespace skewls
