#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "boed/numerics.hpp"
#include "boed/rng.hpp"

namespace boed {

enum class SpecVariant { well, mis };

SpecVariant parse_spec_variant(const std::string& s);
std::string spec_variant_name(SpecVariant v);

// Gaussian observation model that is linear in a feature map:
// y = w . features(xi) + noise, noise ~ N(0, noise_var).
struct LinearModel {
  std::function<Eigen::VectorXd(const Design&)> features;
  int feature_dim = 0;
  double noise_var = 0.0;
};

// A fixed member of a linear feature class, g(xi) = w . features(xi).
// Used for proxies, best-in-class projections, and discretized classes.
struct LinearFn {
  std::function<Eigen::VectorXd(const Design&)> features;
  Eigen::VectorXd w;

  double operator()(const Design& xi) const { return w.dot(features(xi)); }
};

// Polynomial feature map [1, x, x^2, ..., x^degree] for scalar designs.
LinearModel poly_feature_model(int degree, double noise_var);

// One experiment environment: the true data-generating process, the assumed
// model (prior, likelihood, predictor), and the design domain with its
// uniform test distribution.
struct Testbed {
  std::string name;
  SpecVariant variant = SpecVariant::well;
  Design lo, hi;  // axis-aligned design domain
  int theta_dim = 0;
  int default_horizon = 1;

  // True process: deterministic mean f*(xi) and the observation sampler.
  std::function<double(const Design&)> dgp_mean;
  std::function<double(const Design&, RngStream&)> dgp_sample;

  // Assumed model.
  std::function<Eigen::VectorXd(RngStream&)> prior_sample;
  std::function<double(const Eigen::VectorXd&, const Design&)> predict;
  std::function<double(const Eigen::VectorXd&, const Design&, double)> log_lik;
  std::function<double(const Eigen::VectorXd&, const Design&, RngStream&)>
      model_sample;

  // Present when the assumed model is conjugate (linear-Gaussian).
  std::optional<LinearModel> linear;

  [[nodiscard]] int design_dim() const { return static_cast<int>(lo.size()); }
  // Uniform candidate grid: n points per axis, endpoints included.
  [[nodiscard]] SampleSet design_grid(int n_per_axis) const;
  // Uniform draw from the design domain (the test distribution).
  [[nodiscard]] Design sample_domain(RngStream& rng) const;
};

// ---- polynomial regression -------------------------------------------------

struct PolyConfig {
  bool cubic_dgp = false;   // adds +0.2 x^3 to the DGP mean
  int model_degree = 0;     // 0 = derive from variant (well: 2, mis: 1)
  double noise_var = 0.1;   // shared by DGP and assumed model
  double domain_halfwidth = 4.0;
  double prior_scale = 1.0;  // prior on weights is N(0, scale^2 I)
  int horizon = 10;
};

double poly_dgp_mean(double x, const PolyConfig& cfg);

Testbed make_poly_testbed(SpecVariant variant, const PolyConfig& cfg = {});

// ---- acoustic source localization -------------------------------------------

struct SourceConstants {
  double base = 0.1;       // b
  double max_signal = 1e-4;  // m
  double amplitude = 1.0;  // alpha, shared across sources
};

struct SourceConfig {
  int num_sources = 2;  // K
  int dim = 1;          // d, location/design dimension
  double log_noise_sd = 0.1;
  double domain_halfwidth = 4.0;
  int horizon = 30;
  SourceConstants well{0.1, 1e-4, 1.0};
  SourceConstants mis{0.4, 4e-4, 0.4};
};

// mu(theta, xi) = b + sum_k alpha / (m + ||theta_k - xi||^2); theta is the
// stacked source locations (K blocks of dim components).
double acoustic_intensity(const Eigen::VectorXd& theta, const Design& xi,
                          const SourceConstants& c);

// y = exp(N(log mu, sd^2)): log-observations are Gaussian around log mu.
double source_observe(const Eigen::VectorXd& theta, const Design& xi,
                      const SourceConstants& c, double log_noise_sd,
                      RngStream& rng);

// The DGP closes over true source locations theta_star (dimension K*dim).
// Misspecified variant: DGP uses the `mis` constants while the assumed model
// keeps the `well` constants.
Testbed make_source_testbed(SpecVariant variant,
                            const Eigen::VectorXd& theta_star,
                            const SourceConfig& cfg = {});

// ---- pharmacokinetics --------------------------------------------------------

struct PkConfig {
  Eigen::Vector3d theta_real{1.5, 0.15, 15.0};  // (k_a, k_e, V)
  double dose = 400.0;                          // D_V
  double rho = 0.25;           // slow/fast absorption-rate ratio
  double fast_fraction = 0.6;  // f
  bool dual_minus_sign = false;  // conventional "-" variant of the dual model
  // Prior: log theta ~ N((log 1, log 0.1, log 20), 0.05 I).
  Eigen::Vector3d prior_log_mean{std::log(1.0), std::log(0.1), std::log(20.0)};
  double prior_log_var = 0.05;
  double domain_hi = 24.0;  // hours
  int horizon = 10;
};

// z(xi; theta) = (dose/V) * k_a/(k_a - k_e) * (e^{-k_e xi} - e^{-k_a xi})
double pk_concentration(const Eigen::Vector3d& theta, double xi, double dose);

// Dual-absorption mean with rates k_a and rho*k_a mixed by fast_fraction.
// The default combines e^{-k_e xi} + e^{-k_a xi} with a plus sign, exactly as
// specified; minus_sign switches to the conventional difference form.
double pk_dual_absorption(const Eigen::Vector3d& theta, double xi, double dose,
                          double rho, double fast_fraction, bool minus_sign);

// Gaussian observation around the variant's mean curve with heteroskedastic
// variance: well 0.01 z^2 + 0.1, mis 0.02 z_pre^2 + 0.2.
double pk_observe(const Eigen::Vector3d& theta, double xi, SpecVariant variant,
                  const PkConfig& cfg, RngStream& rng);

// The DGP is always the well-specified law at theta_real; the mis variant
// swaps the assumed model for the dual-absorption law.
Testbed make_pk_testbed(SpecVariant variant, const PkConfig& cfg = {});

}  // namespace boed
