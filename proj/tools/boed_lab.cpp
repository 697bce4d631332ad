#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "boed/diagnostics.hpp"
#include "boed/harness.hpp"

namespace {

using namespace boed;

// CLI flags arrive as raw strings and reuse the config-key parser, so the
// precedence chain is: defaults < manifest < config file < explicit flags.
struct FlagSet {
  std::string config, from_manifest;
  std::string testbed, spec, methods, seeds, out;
  std::string lambda, tau, kappa, steps, grid;
  std::string eig_outer, eig_inner, test_size, mse_reps, particles;
  std::string proxy_steps, proxy_lr;
  bool oracle = false;
  bool enriched = false;
};

void add_run_flags(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--config", f.config, "key=value configuration file");
  cmd->add_option("--from-manifest", f.from_manifest,
                  "reproduce the run described by a manifest.json");
  cmd->add_option("--testbed", f.testbed, "poly | source | pk");
  cmd->add_option("--spec", f.spec, "well | mis");
  cmd->add_option("--methods", f.methods,
                  "comma list of random,bad,ri,ridea,ridea-oracle");
  cmd->add_option("--lambda", f.lambda, "representativeness weight");
  cmd->add_option("--tau", f.tau, "deviation margin");
  cmd->add_option("--kappa", f.kappa, "deviation gate temperature");
  cmd->add_option("--steps", f.steps, "design iterations T");
  cmd->add_option("--seeds", f.seeds, "seed count or comma list");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--grid", f.grid, "candidate grid points per axis");
  cmd->add_option("--eig-outer", f.eig_outer, "outer Monte Carlo samples");
  cmd->add_option("--eig-inner", f.eig_inner, "inner marginal samples");
  cmd->add_option("--test-size", f.test_size, "held-out test designs");
  cmd->add_option("--mse-reps", f.mse_reps,
                  "fresh observations per test design");
  cmd->add_option("--particles", f.particles,
                  "particle count for non-conjugate testbeds");
  cmd->add_option("--proxy-steps", f.proxy_steps, "proxy descent steps");
  cmd->add_option("--proxy-lr", f.proxy_lr, "proxy learning rate");
  cmd->add_flag("--oracle-diagnostics", f.oracle,
                "record the risk decomposition per step");
  cmd->add_flag("--enriched-proxy", f.enriched,
                "train the proxy in a one-degree-richer class");
}

ExperimentConfig build_config(const FlagSet& f) {
  ExperimentConfig cfg;
  if (!f.from_manifest.empty()) cfg = config_from_manifest(f.from_manifest);
  if (!f.config.empty()) {
    for (const auto& [k, v] : parse_config_file(f.config)) {
      apply_config_kv(cfg, k, v);
    }
  }
  const std::vector<std::pair<std::string, const std::string*>> overrides = {
      {"testbed", &f.testbed},       {"variant", &f.spec},
      {"methods", &f.methods},       {"acquisition.lambda", &f.lambda},
      {"acquisition.tau", &f.tau},   {"acquisition.kappa", &f.kappa},
      {"horizon", &f.steps},         {"seeds", &f.seeds},
      {"out", &f.out},               {"grid", &f.grid},
      {"eig.outer", &f.eig_outer},   {"eig.inner", &f.eig_inner},
      {"test_size", &f.test_size},   {"mse_reps", &f.mse_reps},
      {"particles", &f.particles},   {"proxy.steps", &f.proxy_steps},
      {"proxy.lr", &f.proxy_lr},
  };
  for (const auto& [key, value] : overrides) {
    if (!value->empty()) apply_config_kv(cfg, key, *value);
  }
  if (f.oracle) apply_config_kv(cfg, "oracle_diagnostics", "true");
  if (f.enriched) apply_config_kv(cfg, "proxy.enriched", "true");
  return cfg;
}

int report_cells(const RunResult& r, const std::string& out_dir) {
  int failed = 0;
  for (const CellStatus& c : r.cells) {
    if (!c.ok) {
      ++failed;
      std::fprintf(stderr, "cell seed=%llu method=%s failed: %s\n",
                   static_cast<unsigned long long>(c.seed), c.method.c_str(),
                   c.message.c_str());
    }
  }
  std::printf("%zu rows, %zu cells (%d failed) -> %s\n", r.rows.size(),
              r.cells.size(), failed, out_dir.c_str());
  return failed == 0 ? 0 : 2;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::string cur;
  const auto flush = [&] {
    if (cur.empty()) return;
    std::size_t used = 0;
    const double v = std::stod(cur, &used);
    if (used != cur.size()) throw UsageError("bad sweep value: " + cur);
    out.push_back(v);
    cur.clear();
  };
  for (char ch : csv) {
    if (ch == ',') {
      flush();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  flush();
  return out;
}

// ---- property suites for `validate` -------------------------------------------

bool suite_decomposition() {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  RngStream rng(9001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::array<double, 3>> coeffs(3);
    for (auto& c : coeffs) {
      c = {2.0 * rng.normal(), rng.normal(), 0.5 * rng.normal()};
    }
    const auto poly_fn = [](const std::array<double, 3>& c) {
      return ScalarFn([c](const Design& xi) {
        return c[0] + c[1] * xi(0) + c[2] * xi(0) * xi(0);
      });
    };
    SampleSet test;
    for (int i = 0; i < 200; ++i) test.add(tb.sample_domain(rng));
    const DecompositionReport r = decompose(
        poly_fn(coeffs[0]), poly_fn(coeffs[1]), poly_fn(coeffs[2]), test);
    worst = std::max(
        worst, std::abs(r.misspec_bias + r.estim_bias + r.amplification -
                        r.total) /
                   std::max(1.0, r.total));
  }
  const bool pass = worst <= 1e-10;
  std::printf("[%s] decomposition identity: worst relative gap %.3g\n",
              pass ? "PASS" : "FAIL", worst);
  return pass;
}

bool suite_bound() {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  const SampleSet grid = tb.design_grid(201);
  const LinearModel lin = poly_feature_model(1, 0.1);
  std::vector<LinearFn> members;
  for (int j = 0; j <= 40; ++j) {
    Eigen::VectorXd w(2);
    w << -5.0 / 3.0, 0.1 * j;
    members.push_back(LinearFn{lin.features, w});
  }
  // Best member by test risk, and the quantities fixed across trials.
  std::size_t best = 0;
  double best_risk = -1.0;
  double member_sup = 0.0;
  std::vector<double> risks(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    double acc = 0.0;
    for (const Design& xi : grid.points) {
      const double e = members[j](xi) - tb.dgp_mean(xi);
      acc += e * e;
      member_sup = std::max(member_sup, std::abs(members[j](xi)));
    }
    risks[j] = acc / static_cast<double>(grid.size());
    if (best_risk < 0.0 || risks[j] < best_risk) {
      best_risk = risks[j];
      best = j;
    }
  }
  const LinearFn fbar = members[best];
  double b_inf = 0.0, fstar_sup = 0.0;
  for (const Design& xi : grid.points) {
    b_inf = std::max(b_inf, std::abs(fbar(xi) - tb.dgp_mean(xi)));
    fstar_sup = std::max(fstar_sup, std::abs(tb.dgp_mean(xi)));
  }

  RngStream rng(4242);
  const int trials = 100, n = 50;
  int held = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream trial_rng = rng.child(static_cast<std::uint64_t>(trial));
    SampleSet train;
    std::vector<double> ys(n);
    double y_sup = 0.0;
    for (int i = 0; i < n; ++i) {
      train.add(tb.sample_domain(trial_rng));
      ys[static_cast<std::size_t>(i)] =
          tb.dgp_sample(train.points.back(), trial_rng);
      y_sup = std::max(y_sup, std::abs(ys[static_cast<std::size_t>(i)]));
    }
    std::size_t erm = 0;
    double erm_loss = -1.0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      double loss = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = members[j](train.points[static_cast<std::size_t>(i)]) -
                         ys[static_cast<std::size_t>(i)];
        loss += e * e;
      }
      if (erm_loss < 0.0 || loss < erm_loss) {
        erm_loss = loss;
        erm = j;
      }
    }
    const ScalarFn fhat = ScalarFn(members[erm]);
    const double r_test = decompose(fhat, ScalarFn(fbar), tb.dgp_mean, grid).total;
    BoundInputs in;
    in.c_inf = density_ratio_sup(train, grid);
    in.b_inf = b_inf;
    in.y_inf = 1.5 * std::max({member_sup, fstar_sup, y_sup});
    in.a_hat = amplification_term(fhat, ScalarFn(fbar), tb.dgp_mean, train);
    in.class_size = static_cast<int>(members.size());
    in.n = n;
    in.delta = 0.05;
    if (r_test <= bound_rhs(in)) ++held;
  }
  const double rate = static_cast<double>(held) / trials;
  const bool pass = rate >= 0.95;
  std::printf("[%s] bound validation: held in %d/%d trials (%.1f%%)\n",
              pass ? "PASS" : "FAIL", held, trials, 100.0 * rate);
  return pass;
}

bool suite_regions() {
  const Testbed tb = make_poly_testbed(SpecVariant::mis);
  const SampleSet grid = tb.design_grid(201);
  const LinearModel lin = poly_feature_model(1, 0.1);
  RngStream rng(77);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double c0 = rng.normal(), c1 = rng.normal(), c2 = 0.5 * rng.normal();
    const ScalarFn fstar = [=](const Design& xi) {
      return c0 + c1 * xi(0) + c2 * xi(0) * xi(0);
    };
    const LinearFn proj = best_in_class(fstar, lin, grid);
    const ScalarFn fbar = ScalarFn(proj);
    double b_inf = 0.0;
    for (const Design& xi : grid.points) {
      b_inf = std::max(b_inf, std::abs(fbar(xi) - fstar(xi)));
    }
    if (b_inf == 0.0) continue;
    const double s = 0.5 + 7.5 * rng.uniform();
    const ScalarFn fhat = [=](const Design& xi) {
      return fbar(xi) + s * (fbar(xi) - fstar(xi));
    };
    const double tau0 = 0.5 * rng.uniform();
    const auto approx = deamp_region_approx(fhat, fbar, grid,
                                            deamp_threshold(tau0, b_inf, 2.0));
    const auto exact = deamp_region_exact(fhat, fbar, fstar, grid, tau0);
    if (!std::includes(exact.begin(), exact.end(), approx.begin(),
                       approx.end())) {
      ++violations;
    }
    // Proxy inclusion with a reference perturbed by at most tau2.
    const double tau2 = rng.uniform();
    const ScalarFn g = [=](const Design& xi) {
      return fbar(xi) + 0.9 * tau2 * std::sin(3.0 * xi(0));
    };
    const double tau1 = 3.0 * rng.uniform();
    const auto proxy = deamp_region_approx(fhat, g, grid, tau1 + tau2);
    const auto outer = deamp_region_approx(fhat, fbar, grid, tau1);
    if (!std::includes(outer.begin(), outer.end(), proxy.begin(),
                       proxy.end())) {
      ++violations;
    }
  }
  const bool pass = violations == 0;
  std::printf("[%s] region inclusions: %d violations in 50 trials\n",
              pass ? "PASS" : "FAIL", violations);
  return pass;
}

int run_validate() {
  bool all = true;
  all = suite_decomposition() && all;
  all = suite_bound() && all;
  all = suite_regions() && all;
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential Bayesian experimental-design simulator"};
  app.require_subcommand(1);

  FlagSet run_flags, sweep_flags;
  std::string sweep_param, sweep_values;

  CLI::App* run_cmd = app.add_subcommand("run", "run the design loop");
  add_run_flags(run_cmd, run_flags);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run once per parameter value");
  add_run_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", sweep_param, "lambda | tau")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma list of values")
      ->required();

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "run the diagnostics property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      const ExperimentConfig cfg = build_config(run_flags);
      const RunResult result = run_experiment(cfg);
      return report_cells(result, cfg.out_dir);
    }
    if (sweep_cmd->parsed()) {
      const ExperimentConfig cfg = build_config(sweep_flags);
      const std::vector<double> values = parse_values(sweep_values);
      const std::vector<RunResult> results = sweep(cfg, sweep_param, values);
      int code = 0;
      for (std::size_t i = 0; i < results.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%g", sweep_param.c_str(),
                      values[i]);
        const int c = report_cells(results[i], cfg.out_dir + "/" + buf);
        code = std::max(code, c);
      }
      return code;
    }
    if (validate_cmd->parsed()) return run_validate();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
