#pragma once

#include <Eigen/Dense>
#include <functional>

#include "boed/inference.hpp"
#include "boed/numerics.hpp"
#include "boed/rng.hpp"
#include "boed/testbeds.hpp"

namespace boed {

struct EigConfig {
  int outer = 500;  // N joint draws
  int inner = 500;  // M marginal samples (the outer draw is included)
  // Redraw the inner marginal pool for every outer sample. Slower; used when
  // the reported standard error must be calibrated (oracle comparisons).
  // With a shared pool the outer terms are slightly correlated and std_error
  // reflects their scatter only.
  bool fresh_inner = false;
};

struct EigEstimate {
  double value = 0.0;      // nats
  double std_error = 0.0;  // per-outer-term scatter / sqrt(N)
  int outer = 0;
  int inner = 0;
};

// Sampling/likelihood access the estimator needs from a posterior + model
// pair. loglik_batch fills one log-likelihood per row of thetas.
struct EigProblem {
  int theta_dim = 0;
  std::function<void(Eigen::MatrixXd&, RngStream&)> sample_thetas;
  std::function<double(const Eigen::VectorXd&, const Design&, RngStream&)>
      sample_y;
  std::function<void(const Eigen::MatrixXd&, const Design&, double,
                     Eigen::ArrayXd&)>
      loglik_batch;
};

EigProblem make_eig_problem(const ConjugateState& state);
EigProblem make_eig_problem(const ParticleState& state, const Testbed& tb);

// Nested Monte Carlo estimate of the expected information gain at xi:
// outer average of log p(y_n | theta_n, xi) minus the log of an M-sample
// marginal average whose inner set always contains theta_n.
// Deterministic given the rng stream (taken by value).
EigEstimate eig_nmc(const EigProblem& problem, const Design& xi,
                    const EigConfig& cfg, RngStream rng);

// Closed-form information gain for the conjugate linear-Gaussian model:
// 0.5 log(1 + phi' Sigma phi / noise_var).
double eig_linear_gaussian(const ConjugateState& state, const Design& xi);

}  // namespace boed
