#include "boed/acquisition.hpp"

#include <algorithm>
#include <cmath>

namespace boed {

Method parse_method(const std::string& name) {
  if (name == "random") return Method::random;
  if (name == "bad") return Method::bad;
  if (name == "ri") return Method::ri;
  if (name == "ridea") return Method::ridea;
  if (name == "ridea-oracle") return Method::ridea_oracle;
  throw UsageError("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::random: return "random";
    case Method::bad: return "bad";
    case Method::ri: return "ri";
    case Method::ridea: return "ridea";
    case Method::ridea_oracle: return "ridea-oracle";
  }
  throw UsageError("method_name: invalid method");
}

namespace {

// One EIG estimate per candidate, each from child stream i of the shared
// parent; every scoring strategy consumes rng identically.
std::vector<double> eig_values(const EigProblem& problem,
                               const SampleSet& candidates,
                               const EigConfig& cfg, const RngStream& rng) {
  std::vector<double> values(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values[i] =
        eig_nmc(problem, candidates.points[i], cfg, rng.child(i)).value;
  }
  return values;
}

// Strict comparison keeps the lowest index on ties.
SelectionResult pick_argmax(std::vector<double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return SelectionResult{best, scores[static_cast<std::size_t>(best)],
                         std::move(scores)};
}

void require_candidates(const SampleSet& candidates) {
  if (candidates.empty()) {
    throw UsageError("selection requires a non-empty candidate set");
  }
}

}  // namespace

SelectionResult select_random(const SampleSet& candidates, RngStream& rng) {
  require_candidates(candidates);
  const auto idx = static_cast<int>(rng.uniform_index(candidates.size()));
  return SelectionResult{idx, 0.0, {}};
}

SelectionResult select_bad(const EigProblem& problem,
                           const SampleSet& candidates, const EigConfig& cfg,
                           const RngStream& rng) {
  require_candidates(candidates);
  return pick_argmax(eig_values(problem, candidates, cfg, rng));
}

double robust_ratio(const SampleSet& history, const Design& xi,
                    const SampleSet& test_sample, double lambda,
                    double sigma) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw UsageError("robust_ratio: lambda must be finite and non-negative");
  }
  if (test_sample.empty()) {
    throw UsageError("robust_ratio: test sample must be non-empty");
  }
  if (history.empty()) return 1.0;  // no shift information at t=1
  const double base = mmd(history, test_sample, sigma);
  if (base == 0.0) return 1.0;  // history already matches the test sample
  SampleSet augmented = history;
  augmented.add(xi);
  const double shifted = mmd(augmented, test_sample, sigma);
  return std::max(0.0, 1.0 - lambda * shifted / base);
}

SelectionResult select_ri(const EigProblem& problem,
                          const SampleSet& candidates,
                          const SampleSet& history,
                          const SampleSet& test_sample,
                          const AcquisitionConfig& cfg, const RngStream& rng) {
  require_candidates(candidates);
  std::vector<double> scores =
      eig_values(problem, candidates, cfg.eig, rng);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = std::max(0.0, scores[i]) *
                robust_ratio(history, candidates.points[i], test_sample,
                             cfg.lambda, cfg.mmd_sigma);
  }
  return pick_argmax(std::move(scores));
}

double dea_factor(double fhat_xi, double g_xi, double tau, double kappa) {
  if (!(kappa > 0.0)) throw UsageError("dea_factor: kappa must be positive");
  return sigmoid((std::abs(fhat_xi - g_xi) - tau) / kappa);
}

SelectionResult select_ridea(const EigProblem& problem,
                             const SampleSet& candidates,
                             const SampleSet& history,
                             const SampleSet& test_sample,
                             const AcquisitionConfig& cfg,
                             const std::function<double(const Design&)>& fhat,
                             const std::function<double(const Design&)>&
                                 deviation_ref,
                             const RngStream& rng) {
  require_candidates(candidates);
  if (!fhat || !deviation_ref) {
    throw UsageError("select_ridea: fhat and deviation reference are required");
  }
  std::vector<double> scores =
      eig_values(problem, candidates, cfg.eig, rng);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Design& xi = candidates.points[i];
    scores[i] = std::max(0.0, scores[i]) *
                robust_ratio(history, xi, test_sample, cfg.lambda,
                             cfg.mmd_sigma) *
                dea_factor(fhat(xi), deviation_ref(xi), cfg.tau, cfg.kappa);
  }
  return pick_argmax(std::move(scores));
}

double proxy_loss(const LinearModel& cls, const Eigen::VectorXd& w,
                  const History& history,
                  const std::function<double(const Design&)>& fhat,
                  double tau) {
  const auto n = static_cast<double>(history.size());
  double square = 0.0, hinge = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double g = w.dot(cls.features(history.designs[i]));
    const double r = g - history.observations[i];
    square += r * r;
    hinge += std::max(0.0, tau - std::abs(fhat(history.designs[i]) - g));
  }
  return (square + hinge) / n;
}

LinearFn train_proxy(
    const LinearModel& cls, const History& history,
    const std::function<double(const Design&)>& fhat, double tau,
    const ProxyConfig& cfg,
    const std::function<void(int, const Eigen::VectorXd&, double)>& monitor) {
  if (history.empty()) {
    throw UsageError("train_proxy: history must contain an observation");
  }
  if (!fhat) throw UsageError("train_proxy: fhat is required");
  if (cfg.steps < 1 || !(cfg.lr > 0.0)) {
    throw UsageError("train_proxy: invalid optimizer settings");
  }
  if (tau < 0.0) throw UsageError("train_proxy: tau must be non-negative");

  const auto n = static_cast<int>(history.size());
  const int p = cls.feature_dim;
  Eigen::MatrixXd Phi(n, p);
  Eigen::VectorXd y(n), fhat_vals(n);
  for (int i = 0; i < n; ++i) {
    Phi.row(i) = cls.features(history.designs[i]).transpose();
    y(i) = history.observations[i];
    fhat_vals(i) = fhat(history.designs[i]);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);  // cold start
  for (int iter = 0; iter < cfg.steps; ++iter) {
    const Eigen::VectorXd g = Phi * w;
    const Eigen::VectorXd resid = g - y;
    const Eigen::ArrayXd dev = fhat_vals.array() - g.array();
    // Hinge subgradient: sign(dev) where tau - |dev| > 0, zero at the kink.
    Eigen::VectorXd hinge_sub(n);
    double square = 0.0, hinge = 0.0;
    for (int i = 0; i < n; ++i) {
      square += resid(i) * resid(i);
      const double margin = tau - std::abs(dev(i));
      hinge += std::max(0.0, margin);
      hinge_sub(i) =
          margin > 0.0 ? (dev(i) > 0.0 ? 1.0 : (dev(i) < 0.0 ? -1.0 : 0.0))
                       : 0.0;
    }
    const double loss = (square + hinge) / n;
    if (!std::isfinite(loss)) {
      throw NumericalError("train_proxy: loss diverged at step " +
                           std::to_string(iter) +
                           " (|w| = " + std::to_string(w.norm()) + ")");
    }
    if (monitor) monitor(iter, w, loss);
    const Eigen::VectorXd grad =
        (2.0 * Phi.transpose() * resid + Phi.transpose() * hinge_sub) / n;
    w -= cfg.lr * grad;
  }
  if (!w.allFinite()) {
    throw NumericalError("train_proxy: non-finite parameters after training");
  }
  return LinearFn{cls.features, w};
}

}  // namespace boed
