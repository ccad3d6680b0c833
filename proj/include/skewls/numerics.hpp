#pragma once

#include <complex>

#include <Eigen/Dense>

namespace skewls {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kDefaultRankTolerance = 1e-10;

struct SvdFactorization {
  Matrix left;
  Eigen::VectorXd singular_values;
  Matrix right;
};

struct SpectralMetrics {
  double spectral_norm = 0;
  double pinv_norm = 0;
  double condition_number = 0;
  double frobenius_norm = 0;
};

// Thin SVD a = U diag(s) V^†. Each column of V is rotated so its first
// nonzero entry is real and nonnegative (U follows along).
SvdFactorization svd(const Matrix& a);

Matrix pseudo_inverse(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

SpectralMetrics spectral_metrics(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

// (V + lambda I)^+ q through a Hermitian eigendecomposition. Eigenvalues of V
// below rank_tolerance * max|eig| are treated as zero and their eigenspace is
// dropped from the solve.
Vector solve_shifted(const Matrix& v, const Vector& q, double lambda,
                     double rank_tolerance = kDefaultRankTolerance);

// lambda * ||V^+||^2 * ||q||; requires q in range(V).
double perturbation_bound(const Matrix& v, const Vector& q, double lambda,
                          double rank_tolerance = kDefaultRankTolerance);

bool all_finite(const Matrix& a);
bool all_finite(const Vector& v);

}  // namespace skewls
