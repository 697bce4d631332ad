#include "boed/testbeds.hpp"

#include <cmath>

#include "doctest.h"

using namespace boed;

namespace {

// Sample mean of `draws` evaluations, with a 3-standard-error window check
// against `expected`.
void check_mc_mean(const std::function<double(RngStream&)>& draw,
                   double expected, int n, RngStream rng) {
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = draw(rng);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  const double se = std::sqrt(var / n);
  CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-12);
}

}  // namespace

TEST_CASE("poly_dgp_mean hand values") {
  const PolyConfig quad;
  CHECK(poly_dgp_mean(0.0, quad) == doctest::Approx(1.0));
  CHECK(poly_dgp_mean(2.0, quad) == doctest::Approx(3.0));
  CHECK(poly_dgp_mean(-4.0, quad) == doctest::Approx(-15.0));
  PolyConfig cubic;
  cubic.cubic_dgp = true;
  CHECK(poly_dgp_mean(2.0, cubic) == doctest::Approx(3.0 + 0.2 * 8.0));
  CHECK(poly_dgp_mean(-4.0, cubic) == doctest::Approx(-15.0 - 0.2 * 64.0));
}

TEST_CASE("poly testbed wiring") {
  const Testbed mis = make_poly_testbed(SpecVariant::mis);
  const Testbed well = make_poly_testbed(SpecVariant::well);
  CHECK(mis.theta_dim == 2);
  CHECK(well.theta_dim == 3);
  CHECK(mis.lo(0) == doctest::Approx(-4.0));
  CHECK(mis.hi(0) == doctest::Approx(4.0));
  CHECK(mis.default_horizon == 10);
  REQUIRE(mis.linear.has_value());
  CHECK(mis.linear->noise_var == doctest::Approx(0.1));

  // predict is linear in the features.
  Eigen::VectorXd theta(2);
  theta << 1.0, 2.0;
  CHECK(mis.predict(theta, scalar_design(3.0)) == doctest::Approx(7.0));

  // DGP draws average to the DGP mean.
  check_mc_mean(
      [&](RngStream& rng) { return mis.dgp_sample(scalar_design(1.5), rng); },
      mis.dgp_mean(scalar_design(1.5)), 10000, RngStream(100));
}

TEST_CASE("poly testbed model sample matches likelihood moments") {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  Eigen::VectorXd theta(2);
  theta << 0.5, -1.0;
  const Design xi = scalar_design(2.0);
  check_mc_mean(
      [&](RngStream& rng) { return tb.model_sample(theta, xi, rng); },
      tb.predict(theta, xi), 10000, RngStream(101));
  // log_lik is a proper Gaussian log-density at the predicted mean.
  const double at_mean = tb.log_lik(theta, xi, tb.predict(theta, xi));
  CHECK(at_mean == doctest::Approx(-0.5 * std::log(2.0 * M_PI * 0.1)));
}

TEST_CASE("design_grid covers the box inclusively") {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  const SampleSet grid = tb.design_grid(201);
  REQUIRE(grid.size() == 201);
  CHECK(grid.points.front()(0) == doctest::Approx(-4.0));
  CHECK(grid.points.back()(0) == doctest::Approx(4.0));
  CHECK(grid.points[100](0) == doctest::Approx(0.0));
  for (const auto& p : grid.points) {
    CHECK(p(0) >= -4.0);
    CHECK(p(0) <= 4.0);
  }
}

TEST_CASE("sample_domain stays inside the box") {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  RngStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Design p = tb.sample_domain(rng);
    CHECK(p(0) >= -4.0);
    CHECK(p(0) < 4.0);
  }
}

TEST_CASE("acoustic_intensity hand values") {
  // Both sources sitting on the design point.
  Eigen::VectorXd theta(2);
  theta << 1.0, 1.0;
  const Design xi = scalar_design(1.0);
  CHECK(acoustic_intensity(theta, xi, SourceConstants{0.1, 1e-4, 1.0}) ==
        doctest::Approx(20000.1).epsilon(1e-12));
  CHECK(acoustic_intensity(theta, xi, SourceConstants{0.4, 4e-4, 0.4}) ==
        doctest::Approx(2000.4).epsilon(1e-12));
}

TEST_CASE("acoustic_intensity distance limit and monotonicity") {
  const SourceConstants c{0.1, 1e-4, 1.0};
  Eigen::VectorXd theta(2);
  theta << 1000.0, -1000.0;
  CHECK(acoustic_intensity(theta, scalar_design(0.0), c) ==
        doctest::Approx(0.1).epsilon(1e-3));

  // Holding source 2 fixed, intensity decreases as source 1 moves away.
  double prev = std::numeric_limits<double>::infinity();
  for (double shift = 0.0; shift <= 3.0; shift += 0.25) {
    Eigen::VectorXd th(2);
    th << shift, 2.0;
    const double mu = acoustic_intensity(th, scalar_design(0.0), c);
    CHECK(mu < prev);
    CHECK(mu > 0.0);
    prev = mu;
  }
}

TEST_CASE("source_observe is positive with Gaussian log") {
  const SourceConstants c{0.1, 1e-4, 1.0};
  Eigen::VectorXd theta(2);
  theta << 0.5, -0.5;
  const Design xi = scalar_design(0.0);
  const double mu = acoustic_intensity(theta, xi, c);
  RngStream rng(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(source_observe(theta, xi, c, 0.1, rng) > 0.0);
  }
  // E[log y] = log mu.
  check_mc_mean(
      [&](RngStream& r) { return std::log(source_observe(theta, xi, c, 0.1, r)); },
      std::log(mu), 10000, RngStream(8));
}

TEST_CASE("source testbed mis variant splits DGP and model constants") {
  SourceConfig cfg;
  Eigen::VectorXd theta_star(2);
  theta_star << 1.0, 1.0;
  const Testbed tb = make_source_testbed(SpecVariant::mis, theta_star, cfg);
  const Design xi = scalar_design(1.0);
  // DGP mean uses the mis table; the assumed model predicts with well table.
  CHECK(tb.dgp_mean(xi) == doctest::Approx(2000.4).epsilon(1e-12));
  CHECK(tb.predict(theta_star, xi) == doctest::Approx(20000.1).epsilon(1e-12));
  // Log-space DGP mean check.
  check_mc_mean(
      [&](RngStream& r) { return std::log(tb.dgp_sample(xi, r)); },
      std::log(2000.4), 10000, RngStream(9));
}

TEST_CASE("source log_lik rejects non-positive observations") {
  SourceConfig cfg;
  Eigen::VectorXd theta_star(2);
  theta_star << 0.0, 0.0;
  const Testbed tb = make_source_testbed(SpecVariant::well, theta_star, cfg);
  CHECK(tb.log_lik(theta_star, scalar_design(0.0), -1.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK(std::isfinite(tb.log_lik(theta_star, scalar_design(0.0), 1.0)));
}

TEST_CASE("pk_concentration hand values") {
  const Eigen::Vector3d theta_real(1.5, 0.15, 15.0);
  CHECK(pk_concentration(theta_real, 0.0, 400.0) == doctest::Approx(0.0));
  CHECK(pk_concentration(theta_real, 1.0, 400.0) ==
        doctest::Approx(18.89119455634453).epsilon(1e-12));
  CHECK(pk_concentration(theta_real, 1e4, 400.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      pk_concentration(Eigen::Vector3d(1.0, 1.0, 15.0), 1.0, 400.0),
      UsageError);
}

TEST_CASE("pk_concentration non-negative over the horizon") {
  const PkConfig cfg;
  const Testbed tb = make_pk_testbed(SpecVariant::well, cfg);
  RngStream rng(10);
  for (double xi = 0.0; xi <= 24.0; xi += 0.25) {
    CHECK(pk_concentration(cfg.theta_real, xi, cfg.dose) >= 0.0);
  }
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd theta = tb.prior_sample(rng);
    for (double xi : {0.0, 1.0, 6.0, 12.0, 24.0}) {
      CHECK(pk_concentration(Eigen::Vector3d(theta), xi, cfg.dose) >= 0.0);
    }
  }
}

TEST_CASE("pk_dual_absorption printed form and minus variant") {
  const Eigen::Vector3d theta_real(1.5, 0.15, 15.0);
  // Verbatim plus-sign form at xi=0.
  CHECK(pk_dual_absorption(theta_real, 0.0, 400.0, 0.25, 0.6, false) ==
        doctest::Approx(71.11111111111111).epsilon(1e-12));
  // Conventional minus form vanishes at xi=0.
  CHECK(pk_dual_absorption(theta_real, 0.0, 400.0, 0.25, 0.6, true) ==
        doctest::Approx(0.0));
  // f=1 collapses to the single-pathway printed form.
  const double single = (400.0 / 15.0) * (1.5 / 1.35) *
                        (std::exp(-0.15 * 2.0) + std::exp(-1.5 * 2.0));
  CHECK(pk_dual_absorption(theta_real, 2.0, 400.0, 0.25, 1.0, false) ==
        doctest::Approx(single).epsilon(1e-12));
  // rho=1 makes both pathways identical for any f.
  CHECK(pk_dual_absorption(theta_real, 2.0, 400.0, 1.0, 0.3, false) ==
        doctest::Approx(single).epsilon(1e-12));
  // Rate collisions are rejected.
  CHECK_THROWS_AS(
      pk_dual_absorption(Eigen::Vector3d(1.5, 0.375, 15.0), 1.0, 400.0, 0.25,
                         0.6, false),
      UsageError);
}

TEST_CASE("pk_observe noise model") {
  const PkConfig cfg;
  // At z=10 the well-specified variance is 0.01*100+0.1 = 1.1.
  // Find xi where z ~ 10: use theta_real and solve by scan.
  double xi10 = 0.0;
  for (double xi = 0.1; xi <= 24.0; xi += 0.01) {
    if (std::abs(pk_concentration(cfg.theta_real, xi, cfg.dose) - 10.0) <
        std::abs(pk_concentration(cfg.theta_real, xi10, cfg.dose) - 10.0)) {
      xi10 = xi;
    }
  }
  const double z = pk_concentration(cfg.theta_real, xi10, cfg.dose);
  RngStream rng(11);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y =
        pk_observe(cfg.theta_real, xi10, SpecVariant::well, cfg, rng);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  const double expected_var = 0.01 * z * z + 0.1;
  CHECK(std::abs(mean - z) <= 3.0 * std::sqrt(expected_var / n));
  // Var(sample var) ~ 2 var^2 / n for Gaussian data.
  CHECK(std::abs(var - expected_var) <=
        3.0 * expected_var * std::sqrt(2.0 / n));
}

TEST_CASE("pk testbed mis variant keeps the well-specified DGP") {
  PkConfig cfg;
  const Testbed tb = make_pk_testbed(SpecVariant::mis, cfg);
  const Design xi = scalar_design(1.0);
  CHECK(tb.dgp_mean(xi) == doctest::Approx(18.89119455634453).epsilon(1e-12));
  // The assumed model predicts with the dual-absorption law.
  CHECK(tb.predict(cfg.theta_real, xi) ==
        doctest::Approx(
            pk_dual_absorption(cfg.theta_real, 1.0, 400.0, 0.25, 0.6, false)));
  check_mc_mean([&](RngStream& r) { return tb.dgp_sample(xi, r); },
                tb.dgp_mean(xi), 10000, RngStream(12));
}

TEST_CASE("pk prior is log-normal around the stated medians") {
  const PkConfig cfg;
  const Testbed tb = make_pk_testbed(SpecVariant::well, cfg);
  RngStream rng(13);
  const int n = 20000;
  Eigen::Vector3d log_sum = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd theta = tb.prior_sample(rng);
    for (int j = 0; j < 3; ++j) {
      CHECK(theta(j) > 0.0);
      log_sum(j) += std::log(theta(j));
    }
  }
  const double se = std::sqrt(0.05 / n);
  CHECK(std::abs(log_sum(0) / n - std::log(1.0)) <= 3.0 * se);
  CHECK(std::abs(log_sum(1) / n - std::log(0.1)) <= 3.0 * se);
  CHECK(std::abs(log_sum(2) / n - std::log(20.0)) <= 3.0 * se);
}
