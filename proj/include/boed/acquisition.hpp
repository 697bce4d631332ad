#pragma once

#include <functional>
#include <string>
#include <vector>

#include "boed/eig.hpp"
#include "boed/inference.hpp"
#include "boed/numerics.hpp"
#include "boed/rng.hpp"

namespace boed {

enum class Method { random, bad, ri, ridea, ridea_oracle };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct AcquisitionConfig {
  double lambda = 1.0;
  double tau = 0.5;
  double kappa = 1.0;
  double mmd_sigma = 1.0;
  EigConfig eig;
};

struct ProxyConfig {
  int steps = 500;
  double lr = 0.01;
  // Train g in a degree+1 feature class instead of the assumed class.
  bool enriched = false;
};

struct SelectionResult {
  int index = 0;
  double score = 0.0;
  std::vector<double> scores;  // per-candidate acquisition values
};

// Uniform draw over the candidate grid.
SelectionResult select_random(const SampleSet& candidates, RngStream& rng);

// argmax of the nested-MC information gain; ties break to the lowest index.
// Candidate i is scored with rng.child(i), so a shared parent stream gives
// identical per-candidate estimates across selection strategies.
SelectionResult select_bad(const EigProblem& problem,
                           const SampleSet& candidates, const EigConfig& cfg,
                           const RngStream& rng);

// 1 - lambda * MMD(history + {xi}, test) / MMD(history, test), clamped at 0.
// Empty history or zero baseline MMD: no correction (returns 1).
double robust_ratio(const SampleSet& history, const Design& xi,
                    const SampleSet& test_sample, double lambda, double sigma);

// argmax of clamp(EIG, 0) * robust_ratio.
SelectionResult select_ri(const EigProblem& problem,
                          const SampleSet& candidates,
                          const SampleSet& history,
                          const SampleSet& test_sample,
                          const AcquisitionConfig& cfg, const RngStream& rng);

// sigmoid((|fhat - g| - tau) / kappa): upweights designs where the current
// predictor and the deviation reference disagree by more than tau.
double dea_factor(double fhat_xi, double g_xi, double tau, double kappa);

// argmax of clamp(EIG, 0) * robust_ratio * dea_factor. `deviation_ref` is the
// trained proxy g, or the true best-in-class predictor for the oracle
// variant.
SelectionResult select_ridea(const EigProblem& problem,
                             const SampleSet& candidates,
                             const SampleSet& history,
                             const SampleSet& test_sample,
                             const AcquisitionConfig& cfg,
                             const std::function<double(const Design&)>& fhat,
                             const std::function<double(const Design&)>&
                                 deviation_ref,
                             const RngStream& rng);

// Fits g(xi) = w . features(xi) by full-batch gradient descent on
//   (1/n) sum_i (g(x_i) - y_i)^2 + (1/n) sum_i max(0, tau - |fhat(x_i) - g(x_i)|)
// from a cold start (w = 0), with subgradient 0 at the hinge kink.
// `monitor`, when set, receives (iteration, weights, loss) once per step.
LinearFn train_proxy(
    const LinearModel& cls, const History& history,
    const std::function<double(const Design&)>& fhat, double tau,
    const ProxyConfig& cfg = {},
    const std::function<void(int, const Eigen::VectorXd&, double)>& monitor =
        nullptr);

// The training objective above; exposed for trajectory checks.
double proxy_loss(const LinearModel& cls, const Eigen::VectorXd& w,
                  const History& history,
                  const std::function<double(const Design&)>& fhat,
                  double tau);

}  // namespace boed
