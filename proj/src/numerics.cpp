#include "skewls/numerics.hpp"

#include <cmath>

#include "skewls/errors.hpp"

namespace skewls {

bool all_finite(const Matrix& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const cplx z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

SvdFactorization svd(const Matrix& a) {
  if (!all_finite(a)) throw ContractError("svd: matrix has non-finite entries");
  SvdFactorization out;
  if (a.size() == 0) {
    out.left = Matrix(a.rows(), 0);
    out.right = Matrix(a.cols(), 0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalFailure("svd: did not converge");
  out.left = solver.matrixU();
  out.right = solver.matrixV();
  out.singular_values = solver.singularValues();
  if (!all_finite(out.left) || !all_finite(out.right) || !out.singular_values.allFinite()) {
    throw NumericalFailure("svd: non-finite factors");
  }

  for (Eigen::Index k = 0; k < out.right.cols(); ++k) {
    for (Eigen::Index i = 0; i < out.right.rows(); ++i) {
      const cplx z = out.right(i, k);
      if (std::abs(z) > 1e-14) {
        const cplx phase = std::conj(z) / std::abs(z);
        out.right.col(k) *= phase;
        out.left.col(k) *= phase;
        break;
      }
    }
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& a, double rank_tolerance) {
  if (rank_tolerance < 0) throw ContractError("pseudo_inverse: negative rank tolerance");
  const SvdFactorization f = svd(a);
  Matrix out = Matrix::Zero(a.cols(), a.rows());
  if (f.singular_values.size() == 0) return out;
  const double cutoff = rank_tolerance * f.singular_values[0];
  for (Eigen::Index k = 0; k < f.singular_values.size(); ++k) {
    const double s = f.singular_values[k];
    if (s <= cutoff || s == 0.0) continue;
    out += (f.right.col(k) / s) * f.left.col(k).adjoint();
  }
  return out;
}

SpectralMetrics spectral_metrics(const Matrix& a, double rank_tolerance) {
  const SvdFactorization f = svd(a);
  if (f.singular_values.size() == 0 || f.singular_values[0] == 0.0) {
    throw DomainError("spectral_metrics: matrix is zero");
  }
  const double smax = f.singular_values[0];
  const double cutoff = rank_tolerance * smax;
  double smin = smax;
  for (Eigen::Index k = 0; k < f.singular_values.size(); ++k) {
    if (f.singular_values[k] > cutoff) smin = f.singular_values[k];
  }
  SpectralMetrics m;
  m.spectral_norm = smax;
  m.pinv_norm = 1.0 / smin;
  m.condition_number = smax / smin;
  m.frobenius_norm = f.singular_values.norm();
  return m;
}

namespace {

void check_hermitian(const Matrix& v, const char* who) {
  if (v.rows() != v.cols()) throw ContractError(std::string(who) + ": matrix is not square");
  if (!all_finite(v)) throw ContractError(std::string(who) + ": matrix has non-finite entries");
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double skew = (v - v.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-10 * scale) throw ContractError(std::string(who) + ": matrix is not Hermitian");
}

}  // namespace

Vector solve_shifted(const Matrix& v, const Vector& q, double lambda, double rank_tolerance) {
  if (v.rows() == 0) return Vector(0);
  check_hermitian(v, "solve_shifted");
  if (q.size() != v.rows()) throw ContractError("solve_shifted: dimension mismatch");
  if (!(lambda >= 0)) throw ContractError("solve_shifted: lambda must be nonnegative");
  const Matrix sym = (v + v.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalFailure("solve_shifted: eigensolver failed");
  const Eigen::VectorXd& mu = eig.eigenvalues();
  const Matrix& u = eig.eigenvectors();
  const double cutoff = rank_tolerance * mu.cwiseAbs().maxCoeff();
  const Vector coeff = u.adjoint() * q;
  Vector scaled = Vector::Zero(coeff.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    if (std::abs(mu[k]) <= cutoff) continue;
    const double d = mu[k] + lambda;
    if (d == 0.0) continue;
    scaled[k] = coeff[k] / d;
  }
  return u * scaled;
}

double perturbation_bound(const Matrix& v, const Vector& q, double lambda, double rank_tolerance) {
  check_hermitian(v, "perturbation_bound");
  if (q.size() != v.rows()) throw ContractError("perturbation_bound: dimension mismatch");
  const double qn = q.norm();
  const Matrix vp = pseudo_inverse(v, rank_tolerance);
  if ((v * (vp * q) - q).norm() > 1e-8 * qn) {
    throw PreconditionError("perturbation_bound: q is not in the range of V");
  }
  if (lambda == 0.0 || qn == 0.0) return 0.0;
  const double pn = spectral_metrics(v, rank_tolerance).pinv_norm;
  return lambda * pn * pn * qn;
}

}  // namespace skewls
