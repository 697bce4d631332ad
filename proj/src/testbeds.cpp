#include "boed/testbeds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace boed {

namespace {

double gaussian_log_pdf(double y, double mean, double var) {
  const double r = y - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
}

}  // namespace

SpecVariant parse_spec_variant(const std::string& s) {
  if (s == "well") return SpecVariant::well;
  if (s == "mis") return SpecVariant::mis;
  throw UsageError("unknown specification variant: " + s);
}

std::string spec_variant_name(SpecVariant v) {
  return v == SpecVariant::well ? "well" : "mis";
}

LinearModel poly_feature_model(int degree, double noise_var) {
  if (degree < 0) throw UsageError("poly_feature_model: degree must be >= 0");
  if (!(noise_var > 0.0)) {
    throw UsageError("poly_feature_model: noise variance must be positive");
  }
  LinearModel m;
  m.feature_dim = degree + 1;
  m.noise_var = noise_var;
  m.features = [degree](const Design& xi) {
    Eigen::VectorXd phi(degree + 1);
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      phi(k) = p;
      p *= xi(0);
    }
    return phi;
  };
  return m;
}

SampleSet Testbed::design_grid(int n_per_axis) const {
  if (n_per_axis < 1) throw UsageError("design_grid: need at least one point");
  const int d = design_dim();
  SampleSet grid;
  if (n_per_axis == 1) {
    grid.add(0.5 * (lo + hi));
    return grid;
  }
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n_per_axis);
  grid.points.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Design p(d);
    std::size_t rest = idx;
    for (int a = 0; a < d; ++a) {
      const auto step = rest % static_cast<std::size_t>(n_per_axis);
      rest /= static_cast<std::size_t>(n_per_axis);
      p(a) = lo(a) + (hi(a) - lo(a)) * static_cast<double>(step) /
                         static_cast<double>(n_per_axis - 1);
    }
    grid.points.push_back(std::move(p));
  }
  return grid;
}

Design Testbed::sample_domain(RngStream& rng) const {
  Design p(design_dim());
  for (int a = 0; a < design_dim(); ++a) {
    p(a) = lo(a) + (hi(a) - lo(a)) * rng.uniform();
  }
  return p;
}

// ---- polynomial regression -------------------------------------------------

double poly_dgp_mean(double x, const PolyConfig& cfg) {
  double y = 1.0 + 2.0 * x - 0.5 * x * x;
  if (cfg.cubic_dgp) y += 0.2 * x * x * x;
  return y;
}

Testbed make_poly_testbed(SpecVariant variant, const PolyConfig& cfg) {
  if (!(cfg.noise_var > 0.0)) {
    throw UsageError("poly testbed: noise variance must be positive");
  }
  const int degree =
      cfg.model_degree > 0 ? cfg.model_degree
                           : (variant == SpecVariant::well ? 2 : 1);
  const LinearModel model = poly_feature_model(degree, cfg.noise_var);
  const double noise_sd = std::sqrt(cfg.noise_var);
  const double prior_scale = cfg.prior_scale;

  Testbed tb;
  tb.name = "poly";
  tb.variant = variant;
  tb.lo = scalar_design(-cfg.domain_halfwidth);
  tb.hi = scalar_design(cfg.domain_halfwidth);
  tb.theta_dim = model.feature_dim;
  tb.default_horizon = cfg.horizon;
  tb.dgp_mean = [cfg](const Design& xi) { return poly_dgp_mean(xi(0), cfg); };
  tb.dgp_sample = [cfg, noise_sd](const Design& xi, RngStream& rng) {
    return poly_dgp_mean(xi(0), cfg) + noise_sd * rng.normal();
  };
  tb.prior_sample = [p = model.feature_dim, prior_scale](RngStream& rng) {
    Eigen::VectorXd theta(p);
    for (int i = 0; i < p; ++i) theta(i) = prior_scale * rng.normal();
    return theta;
  };
  tb.predict = [model](const Eigen::VectorXd& theta, const Design& xi) {
    return theta.dot(model.features(xi));
  };
  tb.log_lik = [model](const Eigen::VectorXd& theta, const Design& xi,
                       double y) {
    return gaussian_log_pdf(y, theta.dot(model.features(xi)), model.noise_var);
  };
  tb.model_sample = [model, noise_sd](const Eigen::VectorXd& theta,
                                      const Design& xi, RngStream& rng) {
    return theta.dot(model.features(xi)) + noise_sd * rng.normal();
  };
  tb.linear = model;
  return tb;
}

// ---- acoustic source localization -------------------------------------------

double acoustic_intensity(const Eigen::VectorXd& theta, const Design& xi,
                          const SourceConstants& c) {
  if (!(c.max_signal > 0.0)) {
    throw UsageError("acoustic_intensity: max-signal constant must be positive");
  }
  const int d = static_cast<int>(xi.size());
  if (theta.size() % d != 0) {
    throw UsageError("acoustic_intensity: theta is not K stacked locations");
  }
  const int K = static_cast<int>(theta.size()) / d;
  double mu = c.base;
  for (int k = 0; k < K; ++k) {
    const double dist2 = (theta.segment(k * d, d) - xi).squaredNorm();
    mu += c.amplitude / (c.max_signal + dist2);
  }
  return mu;
}

double source_observe(const Eigen::VectorXd& theta, const Design& xi,
                      const SourceConstants& c, double log_noise_sd,
                      RngStream& rng) {
  if (!(log_noise_sd > 0.0)) {
    throw UsageError("source_observe: noise sd must be positive");
  }
  const double log_mu = std::log(acoustic_intensity(theta, xi, c));
  return std::exp(log_mu + log_noise_sd * rng.normal());
}

Testbed make_source_testbed(SpecVariant variant,
                            const Eigen::VectorXd& theta_star,
                            const SourceConfig& cfg) {
  if (cfg.num_sources < 1 || cfg.dim < 1) {
    throw UsageError("source testbed: need K >= 1 sources and dim >= 1");
  }
  const int theta_dim = cfg.num_sources * cfg.dim;
  if (theta_star.size() != theta_dim) {
    throw UsageError("source testbed: theta_star has wrong dimension");
  }
  // DGP constants differ in the misspecified case; the assumed model always
  // keeps the well-specified constants.
  const SourceConstants dgp_c =
      variant == SpecVariant::mis ? cfg.mis : cfg.well;
  const SourceConstants model_c = cfg.well;
  const double sd = cfg.log_noise_sd;

  Testbed tb;
  tb.name = "source";
  tb.variant = variant;
  tb.lo = Design::Constant(cfg.dim, -cfg.domain_halfwidth);
  tb.hi = Design::Constant(cfg.dim, cfg.domain_halfwidth);
  tb.theta_dim = theta_dim;
  tb.default_horizon = cfg.horizon;
  tb.dgp_mean = [theta_star, dgp_c](const Design& xi) {
    return acoustic_intensity(theta_star, xi, dgp_c);
  };
  tb.dgp_sample = [theta_star, dgp_c, sd](const Design& xi, RngStream& rng) {
    return source_observe(theta_star, xi, dgp_c, sd, rng);
  };
  tb.prior_sample = [theta_dim](RngStream& rng) {
    Eigen::VectorXd theta(theta_dim);
    for (int i = 0; i < theta_dim; ++i) theta(i) = rng.normal();
    return theta;
  };
  tb.predict = [model_c](const Eigen::VectorXd& theta, const Design& xi) {
    return acoustic_intensity(theta, xi, model_c);
  };
  // Likelihood in log-observation space: log y ~ N(log mu, sd^2).
  tb.log_lik = [model_c, sd](const Eigen::VectorXd& theta, const Design& xi,
                             double y) {
    if (!(y > 0.0)) return -std::numeric_limits<double>::infinity();
    const double log_mu = std::log(acoustic_intensity(theta, xi, model_c));
    return gaussian_log_pdf(std::log(y), log_mu, sd * sd);
  };
  tb.model_sample = [model_c, sd](const Eigen::VectorXd& theta,
                                  const Design& xi, RngStream& rng) {
    return source_observe(theta, xi, model_c, sd, rng);
  };
  return tb;
}

// ---- pharmacokinetics --------------------------------------------------------

double pk_concentration(const Eigen::Vector3d& theta, double xi, double dose) {
  const double ka = theta(0), ke = theta(1), V = theta(2);
  if (ka == ke) {
    throw UsageError("pk_concentration: absorption rate equals elimination rate");
  }
  if (!(V > 0.0)) throw UsageError("pk_concentration: volume must be positive");
  return (dose / V) * (ka / (ka - ke)) *
         (std::exp(-ke * xi) - std::exp(-ka * xi));
}

double pk_dual_absorption(const Eigen::Vector3d& theta, double xi, double dose,
                          double rho, double fast_fraction, bool minus_sign) {
  const double ka1 = theta(0), ke = theta(1), V = theta(2);
  if (!(rho > 0.0)) throw UsageError("pk_dual_absorption: rho must be positive");
  if (fast_fraction < 0.0 || fast_fraction > 1.0) {
    throw UsageError("pk_dual_absorption: fast fraction must lie in [0, 1]");
  }
  if (!(V > 0.0)) throw UsageError("pk_dual_absorption: volume must be positive");
  const double ka2 = rho * ka1;
  if (ka1 == ke || ka2 == ke) {
    throw UsageError("pk_dual_absorption: absorption rate equals elimination rate");
  }
  const double sign = minus_sign ? -1.0 : 1.0;
  const auto pathway = [&](double ka) {
    return (ka / (ka - ke)) * (std::exp(-ke * xi) + sign * std::exp(-ka * xi));
  };
  return (dose / V) * (fast_fraction * pathway(ka1) +
                       (1.0 - fast_fraction) * pathway(ka2));
}

namespace {

double pk_mean(const Eigen::Vector3d& theta, double xi, SpecVariant variant,
               const PkConfig& cfg) {
  if (variant == SpecVariant::well) {
    return pk_concentration(theta, xi, cfg.dose);
  }
  return pk_dual_absorption(theta, xi, cfg.dose, cfg.rho, cfg.fast_fraction,
                            cfg.dual_minus_sign);
}

double pk_noise_var(double mean, SpecVariant variant) {
  return variant == SpecVariant::well ? 0.01 * mean * mean + 0.1
                                      : 0.02 * mean * mean + 0.2;
}

}  // namespace

double pk_observe(const Eigen::Vector3d& theta, double xi, SpecVariant variant,
                  const PkConfig& cfg, RngStream& rng) {
  const double z = pk_mean(theta, xi, variant, cfg);
  return z + std::sqrt(pk_noise_var(z, variant)) * rng.normal();
}

Testbed make_pk_testbed(SpecVariant variant, const PkConfig& cfg) {
  const PkConfig c = cfg;
  const double prior_log_sd = std::sqrt(cfg.prior_log_var);

  Testbed tb;
  tb.name = "pk";
  tb.variant = variant;
  tb.lo = scalar_design(0.0);
  tb.hi = scalar_design(cfg.domain_hi);
  tb.theta_dim = 3;
  tb.default_horizon = cfg.horizon;
  // The DGP is the well-specified law at theta_real in both variants.
  tb.dgp_mean = [c](const Design& xi) {
    return pk_concentration(c.theta_real, xi(0), c.dose);
  };
  tb.dgp_sample = [c](const Design& xi, RngStream& rng) {
    return pk_observe(c.theta_real, xi(0), SpecVariant::well, c, rng);
  };
  tb.prior_sample = [c, prior_log_sd](RngStream& rng) {
    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) {
      theta(i) = std::exp(c.prior_log_mean(i) + prior_log_sd * rng.normal());
    }
    return theta;
  };
  tb.predict = [c, variant](const Eigen::VectorXd& theta, const Design& xi) {
    return pk_mean(theta, xi(0), variant, c);
  };
  tb.log_lik = [c, variant](const Eigen::VectorXd& theta, const Design& xi,
                            double y) {
    const double z = pk_mean(theta, xi(0), variant, c);
    return gaussian_log_pdf(y, z, pk_noise_var(z, variant));
  };
  tb.model_sample = [c, variant](const Eigen::VectorXd& theta,
                                 const Design& xi, RngStream& rng) {
    return pk_observe(theta, xi(0), variant, c, rng);
  };
  return tb;
}

}  // namespace boed
