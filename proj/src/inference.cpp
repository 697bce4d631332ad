#include "boed/inference.hpp"

#include <cmath>
#include <limits>

namespace boed {

void History::add(const Design& xi, double y) {
  designs.push_back(xi);
  observations.push_back(y);
}

SampleSet History::design_set() const {
  SampleSet s;
  s.points = designs;
  return s;
}

// ---- conjugate Gaussian linear model ----------------------------------------

ConjugateState make_conjugate_prior(const LinearModel& model,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov) {
  if (mean.size() != model.feature_dim || cov.rows() != model.feature_dim ||
      cov.cols() != model.feature_dim) {
    throw UsageError("make_conjugate_prior: dimension mismatch");
  }
  cholesky_spd(cov);  // validates SPD up front
  return ConjugateState{model, mean, cov};
}

ConjugateState make_conjugate_prior(const LinearModel& model, double scale) {
  if (!(scale > 0.0)) {
    throw UsageError("make_conjugate_prior: scale must be positive");
  }
  return ConjugateState{
      model, Eigen::VectorXd::Zero(model.feature_dim),
      scale * scale *
          Eigen::MatrixXd::Identity(model.feature_dim, model.feature_dim)};
}

ConjugateState conjugate_update(const ConjugateState& state, const Design& xi,
                                double y) {
  // Rank-one Gaussian update:
  //   s = phi' Sigma phi + noise_var
  //   mean' = mean + Sigma phi (y - phi' mean) / s
  //   Sigma' = Sigma - (Sigma phi)(Sigma phi)' / s
  const Eigen::VectorXd phi = state.model.features(xi);
  const Eigen::VectorXd sp = state.cov * phi;
  const double s = phi.dot(sp) + state.model.noise_var;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw NumericalError("conjugate_update: non-positive predictive variance");
  }
  ConjugateState out = state;
  out.mean = state.mean + sp * ((y - phi.dot(state.mean)) / s);
  out.cov = state.cov - (sp * sp.transpose()) / s;
  out.cov = 0.5 * (out.cov + out.cov.transpose());  // keep exactly symmetric
  return out;
}

ConjugateState conjugate_update(const ConjugateState& state,
                                const std::vector<Design>& xs,
                                const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw UsageError("conjugate_update: designs and observations differ in count");
  }
  if (xs.empty()) return state;
  // Precision-form batch update:
  //   Sigma'^-1 = Sigma^-1 + Phi' Phi / noise_var
  //   mean' = Sigma' (Sigma^-1 mean + Phi' y / noise_var)
  const int p = state.model.feature_dim;
  const auto n = static_cast<int>(xs.size());
  Eigen::MatrixXd Phi(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    Phi.row(i) = state.model.features(xs[i]).transpose();
    y(i) = ys[i];
  }
  const Eigen::MatrixXd prior_prec_mean_parts =
      Eigen::MatrixXd::Identity(p, p);
  Eigen::LLT<Eigen::MatrixXd> prior_llt(state.cov);
  if (prior_llt.info() != Eigen::Success) {
    throw NumericalError("conjugate_update: prior covariance not SPD");
  }
  const Eigen::MatrixXd prior_prec = prior_llt.solve(prior_prec_mean_parts);
  const Eigen::MatrixXd post_prec =
      prior_prec + Phi.transpose() * Phi / state.model.noise_var;
  const Eigen::VectorXd rhs =
      prior_prec * state.mean + Phi.transpose() * y / state.model.noise_var;
  Eigen::LLT<Eigen::MatrixXd> post_llt(post_prec);
  if (post_llt.info() != Eigen::Success) {
    throw NumericalError("conjugate_update: posterior precision not SPD");
  }
  ConjugateState out = state;
  out.cov = post_llt.solve(Eigen::MatrixXd::Identity(p, p));
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  out.mean = post_llt.solve(rhs);
  return out;
}

double predictive_mean(const ConjugateState& state, const Design& xi) {
  return state.mean.dot(state.model.features(xi));
}

double predictive_var(const ConjugateState& state, const Design& xi) {
  const Eigen::VectorXd phi = state.model.features(xi);
  return phi.dot(state.cov * phi) + state.model.noise_var;
}

Eigen::VectorXd sample_theta(const ConjugateState& state, RngStream& rng) {
  const Eigen::MatrixXd L = cholesky_spd(state.cov);
  Eigen::VectorXd z(state.mean.size());
  for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return state.mean + L * z;
}

// ---- particle posterior -------------------------------------------------------

ParticleState make_particle_prior(const Testbed& tb, int num_particles,
                                  RngStream& rng) {
  if (num_particles < 1) {
    throw UsageError("make_particle_prior: need at least one particle");
  }
  ParticleState state;
  state.thetas.resize(num_particles, tb.theta_dim);
  state.log_w = Eigen::VectorXd::Zero(num_particles);
  for (int m = 0; m < num_particles; ++m) {
    state.thetas.row(m) = tb.prior_sample(rng).transpose();
  }
  return state;
}

Eigen::VectorXd normalized_weights(const ParticleState& state) {
  const double lse = logsumexp(state.log_w.array());
  if (!std::isfinite(lse)) {
    throw NumericalError("particle weights are degenerate (all zero)");
  }
  return (state.log_w.array() - lse).exp();
}

double effective_sample_size(const ParticleState& state) {
  const Eigen::VectorXd w = normalized_weights(state);
  return 1.0 / w.squaredNorm();
}

namespace {

// Systematic resampling: one uniform offset, M evenly spaced CDF probes.
ParticleState systematic_resample(const ParticleState& state, RngStream& rng) {
  const int M = state.count();
  const Eigen::VectorXd w = normalized_weights(state);
  ParticleState out;
  out.thetas.resizeLike(state.thetas);
  out.log_w = Eigen::VectorXd::Zero(M);
  const double u0 = rng.uniform() / M;
  double cdf = w(0);
  int j = 0;
  for (int m = 0; m < M; ++m) {
    const double target = u0 + static_cast<double>(m) / M;
    while (cdf < target && j + 1 < M) {
      ++j;
      cdf += w(j);
    }
    out.thetas.row(m) = state.thetas.row(j);
  }
  return out;
}

}  // namespace

ParticleState particle_update(const ParticleState& state, const Testbed& tb,
                              const Design& xi, double y, RngStream& rng) {
  ParticleState out = state;
  for (int m = 0; m < state.count(); ++m) {
    out.log_w(m) += tb.log_lik(state.thetas.row(m).transpose(), xi, y);
  }
  if (out.log_w.maxCoeff() == -std::numeric_limits<double>::infinity()) {
    throw NumericalError(
        "particle_update: degenerate posterior, likelihood is zero for every "
        "particle");
  }
  if (effective_sample_size(out) < 0.5 * state.count()) {
    out = systematic_resample(out, rng);
  }
  return out;
}

double predictive_mean(const ParticleState& state, const Testbed& tb,
                       const Design& xi) {
  const Eigen::VectorXd w = normalized_weights(state);
  double mean = 0.0;
  for (int m = 0; m < state.count(); ++m) {
    mean += w(m) * tb.predict(state.thetas.row(m).transpose(), xi);
  }
  return mean;
}

Eigen::VectorXd sample_theta(const ParticleState& state, RngStream& rng) {
  const Eigen::VectorXd w = normalized_weights(state);
  const double u = rng.uniform();
  double cdf = 0.0;
  for (int m = 0; m < state.count(); ++m) {
    cdf += w(m);
    if (u < cdf) return state.thetas.row(m).transpose();
  }
  return state.thetas.row(state.count() - 1).transpose();
}

}  // namespace boed
