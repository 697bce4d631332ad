#include "boed/eig.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

namespace boed {

EigProblem make_eig_problem(const ConjugateState& state) {
  const Eigen::MatrixXd L = cholesky_spd(state.cov);
  const Eigen::VectorXd mean = state.mean;
  const LinearModel model = state.model;
  const double noise_sd = std::sqrt(model.noise_var);

  EigProblem p;
  p.theta_dim = model.feature_dim;
  p.sample_thetas = [mean, L](Eigen::MatrixXd& out, RngStream& rng) {
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
      out.row(r) = (mean + L * z).transpose();
    }
  };
  p.sample_y = [model, noise_sd](const Eigen::VectorXd& theta,
                                 const Design& xi, RngStream& rng) {
    return theta.dot(model.features(xi)) + noise_sd * rng.normal();
  };
  p.loglik_batch = [model](const Eigen::MatrixXd& thetas, const Design& xi,
                           double y, Eigen::ArrayXd& out) {
    const Eigen::VectorXd phi = model.features(xi);
    const double norm_const =
        -0.5 * std::log(2.0 * std::numbers::pi * model.noise_var);
    const double inv2v = 1.0 / (2.0 * model.noise_var);
    out = norm_const - (y - (thetas * phi).array()).square() * inv2v;
  };
  return p;
}

EigProblem make_eig_problem(const ParticleState& state, const Testbed& tb) {
  // Freeze the weighted particle set; theta draws resample by weight.
  const auto thetas = std::make_shared<Eigen::MatrixXd>(state.thetas);
  const Eigen::VectorXd w = normalized_weights(state);
  auto cdf = std::make_shared<std::vector<double>>(w.size());
  double acc = 0.0;
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    acc += w(m);
    (*cdf)[static_cast<std::size_t>(m)] = acc;
  }
  cdf->back() = 1.0;

  EigProblem p;
  p.theta_dim = static_cast<int>(state.thetas.cols());
  p.sample_thetas = [thetas, cdf](Eigen::MatrixXd& out, RngStream& rng) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double u = rng.uniform();
      const auto it = std::lower_bound(cdf->begin(), cdf->end(), u);
      const auto idx = static_cast<Eigen::Index>(
          std::min<std::ptrdiff_t>(it - cdf->begin(),
                                   static_cast<std::ptrdiff_t>(cdf->size()) - 1));
      out.row(r) = thetas->row(idx);
    }
  };
  p.sample_y = [&tb](const Eigen::VectorXd& theta, const Design& xi,
                     RngStream& rng) { return tb.model_sample(theta, xi, rng); };
  p.loglik_batch = [&tb](const Eigen::MatrixXd& ths, const Design& xi,
                         double y, Eigen::ArrayXd& out) {
    for (Eigen::Index r = 0; r < ths.rows(); ++r) {
      out(r) = tb.log_lik(ths.row(r).transpose(), xi, y);
    }
  };
  return p;
}

EigEstimate eig_nmc(const EigProblem& problem, const Design& xi,
                    const EigConfig& cfg, RngStream rng) {
  if (cfg.outer < 1 || cfg.inner < 1) {
    throw UsageError("eig_nmc: sample counts must be positive");
  }
  if (!problem.sample_thetas || !problem.sample_y || !problem.loglik_batch) {
    throw UsageError("eig_nmc: problem is missing a sampler or likelihood");
  }
  const int N = cfg.outer;
  const int M = cfg.inner;

  RngStream theta_rng = rng.child(0);
  RngStream y_rng = rng.child(1);
  RngStream pool_rng = rng.child(2);

  Eigen::MatrixXd pool(M - 1, problem.theta_dim);
  Eigen::MatrixXd outer_theta(1, problem.theta_dim);
  Eigen::ArrayXd pool_ll(M - 1);
  Eigen::ArrayXd own_ll(1);
  Eigen::ArrayXd marginal_ll(M);
  if (M > 1 && !cfg.fresh_inner) problem.sample_thetas(pool, pool_rng);

  std::vector<double> terms(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    problem.sample_thetas(outer_theta, theta_rng);
    const Eigen::VectorXd theta = outer_theta.row(0).transpose();
    const double y = problem.sample_y(theta, xi, y_rng);
    problem.loglik_batch(outer_theta, xi, y, own_ll);
    if (M > 1) {
      if (cfg.fresh_inner) problem.sample_thetas(pool, pool_rng);
      problem.loglik_batch(pool, xi, y, pool_ll);
      marginal_ll.head(M - 1) = pool_ll;
    }
    marginal_ll(M - 1) = own_ll(0);
    const double log_marginal =
        logsumexp(marginal_ll) - std::log(static_cast<double>(M));
    const double term = own_ll(0) - log_marginal;
    if (!std::isfinite(term)) {
      throw NumericalError("eig_nmc: non-finite information term at outer draw " +
                           std::to_string(n) + " (y=" + std::to_string(y) + ")");
    }
    terms[static_cast<std::size_t>(n)] = term;
  }

  double sum = 0.0;
  for (double t : terms) sum += t;
  const double mean = sum / N;
  double ss = 0.0;
  for (double t : terms) ss += (t - mean) * (t - mean);
  const double se = N > 1 ? std::sqrt(ss / (N - 1) / N) : 0.0;

  return EigEstimate{mean, se, N, M};
}

double eig_linear_gaussian(const ConjugateState& state, const Design& xi) {
  const Eigen::VectorXd phi = state.model.features(xi);
  const double signal = phi.dot(state.cov * phi);
  return 0.5 * std::log1p(signal / state.model.noise_var);
}

}  // namespace boed
