#include "boed/diagnostics.hpp"

#include <cmath>

#include "boed/errors.hpp"

namespace boed {

namespace {

void require_fns(std::initializer_list<const ScalarFn*> fns) {
  for (const ScalarFn* f : fns) {
    if (!*f) throw UsageError("diagnostics: missing function argument");
  }
}

}  // namespace

DecompositionReport decompose(const ScalarFn& fhat, const ScalarFn& fbar,
                              const ScalarFn& fstar, const SampleSet& test) {
  require_fns({&fhat, &fbar, &fstar});
  if (test.empty()) throw UsageError("decompose: test sample must be non-empty");
  DecompositionReport r;
  r.count = static_cast<int>(test.size());
  for (const Design& xi : test.points) {
    const double u = fbar(xi) - fstar(xi);
    const double v = fhat(xi) - fbar(xi);
    r.misspec_bias += u * u;
    r.estim_bias += v * v;
    r.amplification += 2.0 * u * v;
    const double e = fhat(xi) - fstar(xi);
    r.total += e * e;
  }
  const double n = r.count;
  r.misspec_bias /= n;
  r.estim_bias /= n;
  r.amplification /= n;
  r.total /= n;
  return r;
}

double amplification_term(const ScalarFn& fhat, const ScalarFn& fbar,
                          const ScalarFn& fstar, const SampleSet& train) {
  require_fns({&fhat, &fbar, &fstar});
  if (train.empty()) {
    throw UsageError("amplification_term: training sample must be non-empty");
  }
  double acc = 0.0;
  for (const Design& xi : train.points) {
    acc += (fhat(xi) - fbar(xi)) * (fbar(xi) - fstar(xi));
  }
  return acc / static_cast<double>(train.size());
}

LinearFn best_in_class(const ScalarFn& fstar, const LinearModel& cls,
                       const SampleSet& grid) {
  require_fns({&fstar});
  if (grid.empty()) {
    throw UsageError("best_in_class: grid must be non-empty");
  }
  const int p = cls.feature_dim;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(p);
  for (const Design& xi : grid.points) {
    const Eigen::VectorXd phi = cls.features(xi);
    gram.noalias() += phi * phi.transpose();
    moment.noalias() += phi * fstar(xi);
  }
  return LinearFn{cls.features, solve_spd(gram, moment)};
}

LinearFn best_in_class(const Testbed& tb, const LinearModel& cls,
                       const SampleSet& grid) {
  return best_in_class(tb.dgp_mean, cls, grid);
}

double bound_rhs(const BoundInputs& in) {
  if (in.n < 1) throw UsageError("bound_rhs: n must be >= 1");
  if (in.class_size < 2) throw UsageError("bound_rhs: class size must be >= 2");
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw UsageError("bound_rhs: delta must lie in (0, 1)");
  }
  if (!(in.c_inf >= 1.0)) throw UsageError("bound_rhs: c_inf must be >= 1");
  if (!(in.b_inf >= 0.0) || !(in.y_inf >= 0.0)) {
    throw UsageError("bound_rhs: b_inf and y_inf must be non-negative");
  }
  if (!std::isfinite(in.a_hat)) {
    throw UsageError("bound_rhs: a_hat must be finite");
  }
  const double log_term =
      std::log(static_cast<double>(in.class_size) / in.delta);
  const double est = in.y_inf * in.y_inf * log_term / (3.0 * in.n);
  const double base = in.b_inf * in.b_inf;
  if (in.a_hat < 0.0) {
    return in.c_inf * (base + 224.0 * est - 2.0 * in.a_hat);
  }
  return in.c_inf * (base + 128.0 * est - std::sqrt(3.0) * in.a_hat);
}

double deamp_threshold(double tau0, double b_inf, double c) {
  if (tau0 < 0.0) throw UsageError("deamp_threshold: tau0 must be >= 0");
  if (b_inf < 0.0) throw UsageError("deamp_threshold: b_inf must be >= 0");
  if (c < 2.0) throw UsageError("deamp_threshold: c must be >= 2");
  if (b_inf == 0.0 && tau0 > 0.0) {
    throw UsageError(
        "deamp_threshold: undefined for b_inf = 0 with tau0 > 0 "
        "(well-specified case)");
  }
  const double ratio = tau0 > 0.0 ? tau0 / b_inf : 0.0;
  return ratio + c * b_inf;
}

std::vector<int> deamp_region_exact(const ScalarFn& fhat, const ScalarFn& fbar,
                                    const ScalarFn& fstar,
                                    const SampleSet& grid, double tau0) {
  require_fns({&fhat, &fbar, &fstar});
  if (tau0 < 0.0) throw UsageError("deamp_region_exact: tau0 must be >= 0");
  std::vector<int> region;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Design& xi = grid.points[i];
    const double product = (fhat(xi) - fbar(xi)) * (fbar(xi) - fstar(xi));
    if (product >= tau0) region.push_back(static_cast<int>(i));
  }
  return region;
}

std::vector<int> deamp_region_approx(const ScalarFn& fhat, const ScalarFn& ref,
                                     const SampleSet& grid, double threshold) {
  require_fns({&fhat, &ref});
  if (threshold < 0.0) {
    throw UsageError("deamp_region_approx: threshold must be >= 0");
  }
  std::vector<int> region;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Design& xi = grid.points[i];
    if (std::abs(fhat(xi) - ref(xi)) >= threshold) {
      region.push_back(static_cast<int>(i));
    }
  }
  return region;
}

double density_ratio_sup(const SampleSet& train, const SampleSet& grid) {
  if (train.empty() || grid.empty()) {
    throw UsageError("density_ratio_sup: train and grid must be non-empty");
  }
  if (train.dim() != grid.dim()) {
    throw UsageError("density_ratio_sup: dimension mismatch");
  }
  const std::size_t cells = grid.size();
  std::vector<int> counts(cells, 0);
  for (const Design& xi : train.points) {
    std::size_t best = 0;
    double best_d = (xi - grid.points[0]).squaredNorm();
    for (std::size_t c = 1; c < cells; ++c) {
      const double d = (xi - grid.points[c]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    ++counts[best];
  }
  // Uniform d_test = 1/cells; smoothed d_train = (count + 1) / (n + cells).
  const double n = static_cast<double>(train.size());
  double sup = 0.0;
  for (int c : counts) {
    const double ratio = (n + cells) / (static_cast<double>(cells) * (c + 1));
    sup = std::max(sup, ratio);
  }
  return sup;
}

}  // namespace boed
