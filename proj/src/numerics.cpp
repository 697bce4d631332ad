#include "boed/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boed {

Design scalar_design(double x) {
  Design d(1);
  d << x;
  return d;
}

void SampleSet::add(const Design& p) {
  if (!points.empty() && p.size() != points.front().size()) {
    throw UsageError("SampleSet: point dimension mismatch");
  }
  points.push_back(p);
}

SampleSet SampleSet::from_scalars(const std::vector<double>& xs) {
  SampleSet s;
  s.points.reserve(xs.size());
  for (double x : xs) s.points.push_back(scalar_design(x));
  return s;
}

double rbf_kernel(const Design& p, const Design& q, double sigma) {
  if (p.size() != q.size()) {
    throw UsageError("rbf_kernel: dimension mismatch");
  }
  if (!(sigma > 0.0)) {
    throw UsageError("rbf_kernel: bandwidth must be positive");
  }
  const double d2 = (p - q).squaredNorm();
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

namespace {

// Mean of k(x, y) over all ordered pairs, diagonal included.
double mean_cross_kernel(const SampleSet& X, const SampleSet& Y,
                         double sigma) {
  double total = 0.0;
  for (const auto& x : X.points) {
    for (const auto& y : Y.points) {
      total += rbf_kernel(x, y, sigma);
    }
  }
  return total / (static_cast<double>(X.size()) * static_cast<double>(Y.size()));
}

// Orders the two sets canonically (size, then coordinates) so the summation
// order — and hence the rounding — is independent of argument position,
// keeping mmd_squared bitwise symmetric.
bool swap_for_canonical_order(const SampleSet& X, const SampleSet& Y) {
  if (X.size() != Y.size()) return Y.size() < X.size();
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Design& a = X.points[i];
    const Design& b = Y.points[i];
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      if (a(k) != b(k)) return b(k) < a(k);
    }
  }
  return false;  // identical sets: both orders sum the same values
}

}  // namespace

double mmd_squared(const SampleSet& X, const SampleSet& Y, double sigma) {
  if (X.empty() || Y.empty()) {
    throw UsageError("mmd_squared: sample sets must be non-empty");
  }
  if (X.dim() != Y.dim()) {
    throw UsageError("mmd_squared: sample sets differ in dimension");
  }
  const SampleSet* a = &X;
  const SampleSet* b = &Y;
  if (swap_for_canonical_order(X, Y)) std::swap(a, b);
  return mean_cross_kernel(*a, *a, sigma) + mean_cross_kernel(*b, *b, sigma) -
         2.0 * mean_cross_kernel(*a, *b, sigma);
}

double mmd(const SampleSet& X, const SampleSet& Y, double sigma) {
  return std::sqrt(std::max(0.0, mmd_squared(X, Y, sigma)));
}

double sigmoid(double x) {
  // Evaluate through the negative branch only; avoids overflow for large |x|.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw UsageError("solve_spd: shape mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_spd: matrix is not symmetric positive definite");
  }
  return llt.solve(b);
}

Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw UsageError("cholesky_spd: matrix must be square");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "cholesky_spd: matrix is not symmetric positive definite");
  }
  return llt.matrixL();
}

double logsumexp(const Eigen::ArrayXd& v) {
  if (v.size() == 0) {
    throw UsageError("logsumexp: empty input");
  }
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) {
    // All -inf collapses to -inf; +inf or NaN propagates.
    return m;
  }
  return m + std::log((v - m).exp().sum());
}

}  // namespace boed
