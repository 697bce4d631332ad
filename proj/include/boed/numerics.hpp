#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boed/errors.hpp"
#include "boed/rng.hpp"

namespace boed {

// A point in the design space (scalar designs are 1-vectors).
using Design = Eigen::VectorXd;

Design scalar_design(double x);

// Finite collection of points sharing one dimension.
struct SampleSet {
  std::vector<Design> points;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] bool empty() const { return points.empty(); }
  // Dimension of the points; -1 when empty.
  [[nodiscard]] int dim() const {
    return points.empty() ? -1 : static_cast<int>(points.front().size());
  }
  void add(const Design& p);

  static SampleSet from_scalars(const std::vector<double>& xs);
};

// k(p, q) = exp(-||p - q||^2 / (2 sigma^2)); equals 1 iff p == q.
double rbf_kernel(const Design& p, const Design& q, double sigma);

// Squared maximum mean discrepancy between X and Y under the RBF kernel,
// as the biased V-statistic: all pair terms including the diagonal, so
// identical sets give exactly zero and repeated points are harmless.
double mmd_squared(const SampleSet& X, const SampleSet& Y, double sigma);

// sqrt of mmd_squared with tiny float negatives clamped to zero.
double mmd(const SampleSet& X, const SampleSet& Y, double sigma);

double sigmoid(double x);

// Solves A x = b for symmetric positive definite A via Cholesky.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Lower Cholesky factor of an SPD matrix; throws NumericalError otherwise.
Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& A);

// log(sum(exp(v))) evaluated stably; -inf for empty input is an error.
double logsumexp(const Eigen::ArrayXd& v);

}  // namespace boed
