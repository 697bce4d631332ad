#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boed/numerics.hpp"
#include "boed/rng.hpp"
#include "boed/testbeds.hpp"

namespace boed {

// Ordered record of (design, observation) pairs collected so far.
struct History {
  std::vector<Design> designs;
  std::vector<double> observations;

  [[nodiscard]] std::size_t size() const { return designs.size(); }
  [[nodiscard]] bool empty() const { return designs.empty(); }
  void add(const Design& xi, double y);
  [[nodiscard]] SampleSet design_set() const;
};

// ---- conjugate Gaussian linear model ----------------------------------------

// Posterior over feature weights of a linear-Gaussian model. Value-semantic:
// updates return new states.
struct ConjugateState {
  LinearModel model;
  Eigen::VectorXd mean;  // p
  Eigen::MatrixXd cov;   // p x p, SPD
};

ConjugateState make_conjugate_prior(const LinearModel& model,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov);
// Zero-mean isotropic prior N(0, scale^2 I).
ConjugateState make_conjugate_prior(const LinearModel& model,
                                    double scale = 1.0);

ConjugateState conjugate_update(const ConjugateState& state, const Design& xi,
                                double y);
// Batched update; equals any sequential ordering of the same observations.
ConjugateState conjugate_update(const ConjugateState& state,
                                const std::vector<Design>& xs,
                                const std::vector<double>& ys);

double predictive_mean(const ConjugateState& state, const Design& xi);
// Predictive variance of a new observation: phi' Sigma phi + noise_var.
double predictive_var(const ConjugateState& state, const Design& xi);
Eigen::VectorXd sample_theta(const ConjugateState& state, RngStream& rng);

// ---- particle posterior -------------------------------------------------------

// Self-normalized importance-reweighted prior particles with ESS-triggered
// systematic resampling.
struct ParticleState {
  Eigen::MatrixXd thetas;  // M x p, one particle per row
  Eigen::VectorXd log_w;   // unnormalized log-weights, length M

  [[nodiscard]] int count() const { return static_cast<int>(thetas.rows()); }
};

ParticleState make_particle_prior(const Testbed& tb, int num_particles,
                                  RngStream& rng);

Eigen::VectorXd normalized_weights(const ParticleState& state);
double effective_sample_size(const ParticleState& state);

// Reweights by the testbed likelihood at (xi, y); resamples systematically
// when ESS drops below count/2.
ParticleState particle_update(const ParticleState& state, const Testbed& tb,
                              const Design& xi, double y, RngStream& rng);

double predictive_mean(const ParticleState& state, const Testbed& tb,
                       const Design& xi);
// Draws a particle index by weight (inverse CDF).
Eigen::VectorXd sample_theta(const ParticleState& state, RngStream& rng);

}  // namespace boed
