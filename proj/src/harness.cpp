#include "boed/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "boed/eig.hpp"
#include "boed/errors.hpp"

namespace boed {

namespace {

namespace fs = std::filesystem;

// Stream tags under the per-seed root: 1 test sample, 2 true-parameter draw,
// 3 step-shared DGP noise (child t: 0 observation, 1 MSE), 4 acquisition
// (child method, child t), 5 posterior randomness (child method, child t;
// t = 0 is particle initialization).
constexpr std::uint64_t kTestTag = 1;
constexpr std::uint64_t kThetaStarTag = 2;
constexpr std::uint64_t kNoiseTag = 3;
constexpr std::uint64_t kAcquisitionTag = 4;
constexpr std::uint64_t kPosteriorTag = 5;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_design(const Design& xi) {
  std::string out;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    if (i > 0) out += ';';
    out += fmt_g(xi(i));
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int r = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": not an integer: '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError("config key " + key + ": not a boolean: '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long r = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(r);
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": not an unsigned integer: '" + v +
                     "'");
  }
}

bool uses_method(const ExperimentConfig& cfg, Method m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) !=
         cfg.methods.end();
}

Testbed make_testbed_for_seed(const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  if (cfg.testbed == "poly") return make_poly_testbed(cfg.variant, cfg.poly);
  if (cfg.testbed == "pk") return make_pk_testbed(cfg.variant, cfg.pk);
  // Source locations are redrawn from the prior for every seed.
  const int dim = cfg.source.num_sources * cfg.source.dim;
  const Testbed proto = make_source_testbed(
      cfg.variant, Eigen::VectorXd::Zero(dim), cfg.source);
  RngStream star_rng = RngStream(seed).child(kThetaStarTag);
  return make_source_testbed(cfg.variant, proto.prior_sample(star_rng),
                             cfg.source);
}

// Feature class the proxy g trains in: polynomials spanning the assumed
// model's class (one degree richer when enriched; quadratic span for
// non-conjugate testbeds). The monomials are taken in the design rescaled
// to [-1, 1] so the features stay bounded by 1 and full-batch gradient
// descent is stable at the default learning rate on any design domain.
LinearModel proxy_class(const Testbed& tb, const ExperimentConfig& cfg) {
  int degree = tb.linear ? tb.linear->feature_dim - 1 : 2;
  if (cfg.proxy.enriched) ++degree;
  LinearModel cls =
      poly_feature_model(degree, tb.linear ? tb.linear->noise_var : 1.0);
  double half = std::max(std::abs(tb.lo(0)), std::abs(tb.hi(0)));
  if (!(half > 0.0)) half = 1.0;
  const int p = degree + 1;
  cls.features = [half, p](const Design& xi) {
    Eigen::VectorXd phi(p);
    const double t = xi(0) / half;
    double v = 1.0;
    for (int k = 0; k < p; ++k) {
      phi(k) = v;
      v *= t;
    }
    return phi;
  };
  return cls;
}

// Class whose best member defines fbar (the assumed class, never enriched).
LinearModel assumed_class(const Testbed& tb) {
  return tb.linear ? *tb.linear : poly_feature_model(2, 1.0);
}

// Conjugate posterior for linear-Gaussian testbeds, particles otherwise.
struct Posterior {
  std::optional<ConjugateState> conj;
  std::optional<ParticleState> part;

  static Posterior init(const Testbed& tb, const ExperimentConfig& cfg,
                        RngStream rng) {
    Posterior p;
    if (tb.linear) {
      const double scale =
          cfg.testbed == "poly" ? cfg.poly.prior_scale : 1.0;
      p.conj = make_conjugate_prior(*tb.linear, scale);
    } else {
      p.part = make_particle_prior(tb, cfg.particles, rng);
    }
    return p;
  }

  void update(const Testbed& tb, const Design& xi, double y, RngStream rng) {
    if (conj) {
      conj = conjugate_update(*conj, xi, y);
    } else {
      part = particle_update(*part, tb, xi, y, rng);
    }
  }

  [[nodiscard]] ScalarFn predictor(const Testbed& tb) const {
    if (conj) {
      const ConjugateState s = *conj;
      return [s](const Design& xi) { return predictive_mean(s, xi); };
    }
    const ParticleState s = *part;
    const Testbed copy = tb;
    return [s, copy](const Design& xi) { return predictive_mean(s, copy, xi); };
  }

  [[nodiscard]] EigProblem problem(const Testbed& tb) const {
    if (conj) return make_eig_problem(*conj);
    return make_eig_problem(*part, tb);
  }
};

void write_row(std::ofstream& csv, const MetricsRow& r) {
  csv << r.seed << ',' << r.step << ',' << r.method << ',' << fmt_g(r.mse)
      << ',' << fmt_g(r.mmd2) << ',' << join_design(r.design) << ','
      << fmt_g(r.score) << ',';
  if (r.has_diag) {
    csv << fmt_g(r.b) << ',' << fmt_g(r.c) << ',' << fmt_g(r.a) << ','
        << fmt_g(r.a_hat);
  } else {
    csv << ",,,";
  }
  csv << '\n';
  csv.flush();  // partial runs must leave a parseable file
}

void run_cell(const ExperimentConfig& cfg, const Testbed& tb, int horizon,
              std::uint64_t seed, Method method, const SampleSet& test,
              const SampleSet& grid, const std::optional<LinearFn>& fbar,
              std::vector<MetricsRow>& rows, std::ofstream& csv) {
  const RngStream root(seed);
  const auto m_idx = static_cast<std::uint64_t>(method);
  Posterior post = Posterior::init(
      tb, cfg, root.child(kPosteriorTag).child(m_idx).child(0));

  const LinearModel g_class = proxy_class(tb, cfg);
  LinearFn g_proxy{g_class.features,
                   Eigen::VectorXd::Zero(g_class.feature_dim)};
  const ScalarFn fbar_fn =
      fbar ? ScalarFn(*fbar) : ScalarFn();
  History history;

  for (int t = 1; t <= horizon; ++t) {
    const ScalarFn fhat = post.predictor(tb);
    const RngStream acq =
        root.child(kAcquisitionTag).child(m_idx).child(
            static_cast<std::uint64_t>(t));
    SelectionResult sel;
    switch (method) {
      case Method::random: {
        RngStream draw = acq;
        sel = select_random(grid, draw);
        break;
      }
      case Method::bad: {
        const EigProblem problem = post.problem(tb);
        sel = select_bad(problem, grid, cfg.acquisition.eig, acq);
        break;
      }
      case Method::ri: {
        const EigProblem problem = post.problem(tb);
        sel = select_ri(problem, grid, history.design_set(), test,
                        cfg.acquisition, acq);
        break;
      }
      case Method::ridea: {
        const EigProblem problem = post.problem(tb);
        const LinearFn g = g_proxy;
        sel = select_ridea(problem, grid, history.design_set(), test,
                           cfg.acquisition, fhat,
                           [g](const Design& xi) { return g(xi); }, acq);
        break;
      }
      case Method::ridea_oracle: {
        const EigProblem problem = post.problem(tb);
        sel = select_ridea(problem, grid, history.design_set(), test,
                           cfg.acquisition, fhat, fbar_fn, acq);
        break;
      }
    }

    const Design xi = grid.points[static_cast<std::size_t>(sel.index)];
    RngStream obs_rng = root.child(kNoiseTag)
                            .child(static_cast<std::uint64_t>(t))
                            .child(0);
    const double y = tb.dgp_sample(xi, obs_rng);
    post.update(tb, xi, y,
                root.child(kPosteriorTag).child(m_idx).child(
                    static_cast<std::uint64_t>(t)));
    history.add(xi, y);

    const ScalarFn fitted = post.predictor(tb);
    if (method == Method::ridea) {
      g_proxy = train_proxy(g_class, history, fitted, cfg.acquisition.tau,
                            cfg.proxy);
    }

    MetricsRow row;
    row.seed = seed;
    row.step = t;
    row.method = method_name(method);
    row.mse = compute_mse(fitted, test, tb.dgp_sample, cfg.mse_reps,
                          root.child(kNoiseTag)
                              .child(static_cast<std::uint64_t>(t))
                              .child(1));
    row.mmd2 = mmd_squared(history.design_set(), test,
                           cfg.acquisition.mmd_sigma);
    row.design = xi;
    row.score = sel.score;
    if (cfg.oracle_diagnostics) {
      const DecompositionReport d =
          decompose(fitted, fbar_fn, tb.dgp_mean, test);
      row.has_diag = true;
      row.b = d.misspec_bias;
      row.c = d.estim_bias;
      row.a = d.amplification;
      row.a_hat =
          amplification_term(fitted, fbar_fn, tb.dgp_mean,
                             history.design_set());
    }
    rows.push_back(row);
    write_row(csv, row);
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.testbed != "poly" && cfg.testbed != "source" && cfg.testbed != "pk") {
    throw UsageError("unknown testbed: " + cfg.testbed);
  }
  if (cfg.methods.empty()) throw UsageError("method list is empty");
  if (cfg.seeds.empty()) throw UsageError("seed list is empty");
  if (cfg.horizon < 0) throw UsageError("horizon must be >= 0");
  if (cfg.grid_points < 2) throw UsageError("grid must have >= 2 points");
  if (cfg.test_size < 2) throw UsageError("test sample size must be >= 2");
  if (cfg.mse_reps < 1) throw UsageError("mse reps must be >= 1");
  if (cfg.particles < 2) throw UsageError("particle count must be >= 2");
  const AcquisitionConfig& a = cfg.acquisition;
  if (!(a.lambda >= 0.0) || !std::isfinite(a.lambda)) {
    throw UsageError("lambda must be finite and >= 0");
  }
  if (!(a.tau >= 0.0) || !std::isfinite(a.tau)) {
    throw UsageError("tau must be finite and >= 0");
  }
  if (!(a.kappa > 0.0)) throw UsageError("kappa must be > 0");
  if (!(a.mmd_sigma > 0.0)) throw UsageError("mmd sigma must be > 0");
  if (a.eig.outer < 1 || a.eig.inner < 1) {
    throw UsageError("eig sample counts must be >= 1");
  }
  if (cfg.proxy.steps < 1) throw UsageError("proxy steps must be >= 1");
  if (!(cfg.proxy.lr > 0.0)) throw UsageError("proxy lr must be > 0");
  if (cfg.testbed == "source" && cfg.source.dim > 1 &&
      (uses_method(cfg, Method::ridea) ||
       uses_method(cfg, Method::ridea_oracle))) {
    throw UsageError("proxy-based methods require scalar designs");
  }
}

double compute_mse(const ScalarFn& fhat, const SampleSet& test,
                   const std::function<double(const Design&, RngStream&)>& dgp,
                   int reps, RngStream rng) {
  if (!fhat || !dgp) throw UsageError("compute_mse: missing function");
  if (test.empty()) throw UsageError("compute_mse: empty test sample");
  if (reps < 1) throw UsageError("compute_mse: reps must be >= 1");
  double acc = 0.0;
  for (const Design& xi : test.points) {
    const double pred = fhat(xi);
    for (int i = 0; i < reps; ++i) {
      const double y = dgp(xi, rng);
      acc += (pred - y) * (pred - y);
    }
  }
  return acc / (static_cast<double>(test.size()) * reps);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);
  const std::string csv_path = cfg.out_dir + "/metrics.csv";
  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw UsageError("cannot open for writing: " + csv_path);
  csv << "seed,step,method,mse,mmd2,design,score,B,C,A,Ahat\n";
  csv.flush();

  RunResult result;
  for (std::uint64_t seed : cfg.seeds) {
    const Testbed tb = make_testbed_for_seed(cfg, seed);
    const int horizon = cfg.horizon > 0 ? cfg.horizon : tb.default_horizon;
    const SampleSet grid = tb.design_grid(cfg.grid_points);

    RngStream test_rng = RngStream(seed).child(kTestTag);
    SampleSet test;
    for (int i = 0; i < cfg.test_size; ++i) test.add(tb.sample_domain(test_rng));

    std::optional<LinearFn> fbar;
    if (cfg.oracle_diagnostics || uses_method(cfg, Method::ridea_oracle)) {
      fbar = best_in_class(tb.dgp_mean, assumed_class(tb), grid);
    }

    for (Method method : cfg.methods) {
      CellStatus status;
      status.seed = seed;
      status.method = method_name(method);
      try {
        run_cell(cfg, tb, horizon, seed, method, test, grid, fbar,
                 result.rows, csv);
      } catch (const std::exception& e) {
        status.ok = false;
        status.message = e.what();
      }
      result.cells.push_back(status);
    }
  }

  if (!result.rows.empty()) emit_plotdata(result.rows, cfg.out_dir);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  nlohmann::json manifest;
  manifest["tool"] = "boed-lab";
  manifest["version"] = "0.1.0";
  manifest["status"] = result.all_ok() ? "complete" : "partial";
  manifest["wall_clock_seconds"] = wall;
  manifest["schema"] = "seed,step,method,mse,mmd2,design,score,B,C,A,Ahat";
  manifest["seeds"] = cfg.seeds;
  nlohmann::json conf = nlohmann::json::object();
  for (const auto& [k, v] : config_as_kv(cfg)) conf[k] = v;
  manifest["config"] = conf;
  std::ofstream mf(cfg.out_dir + "/manifest.json", std::ios::trunc);
  mf << manifest.dump(2) << '\n';

  return result;
}

std::vector<RunResult> sweep(const ExperimentConfig& cfg,
                             const std::string& param,
                             const std::vector<double>& values) {
  if (param != "lambda" && param != "tau") {
    throw UsageError("sweep parameter must be lambda or tau");
  }
  if (values.empty()) throw UsageError("sweep values are empty");
  std::vector<RunResult> results;
  for (double v : values) {
    ExperimentConfig c = cfg;
    if (param == "lambda") {
      c.acquisition.lambda = v;
    } else {
      c.acquisition.tau = v;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", param.c_str(), v);
    c.out_dir = cfg.out_dir + "/" + buf;
    results.push_back(run_experiment(c));
  }
  return results;
}

void emit_plotdata(const std::vector<MetricsRow>& rows,
                   const std::string& dir) {
  if (rows.empty()) throw UsageError("emit_plotdata: no rows");
  std::vector<std::string> order;
  std::map<std::pair<std::string, int>, std::vector<const MetricsRow*>> cells;
  for (const MetricsRow& r : rows) {
    if (std::find(order.begin(), order.end(), r.method) == order.end()) {
      order.push_back(r.method);
    }
    cells[{r.method, r.step}].push_back(&r);
  }
  std::set<int> steps;
  for (const auto& kv : cells) steps.insert(kv.first.second);

  const auto write_metric = [&](const std::string& name, auto getter) {
    std::ofstream out(dir + "/" + name, std::ios::trunc);
    if (!out) throw UsageError("cannot open for writing: " + dir + "/" + name);
    out << "method,step,mean,se,n\n";
    for (const std::string& m : order) {
      for (int s : steps) {
        const auto it = cells.find({m, s});
        if (it == cells.end()) continue;
        const auto& cell = it->second;
        const auto n = static_cast<double>(cell.size());
        double mean = 0.0;
        for (const MetricsRow* r : cell) mean += getter(*r);
        mean /= n;
        double ss = 0.0;
        for (const MetricsRow* r : cell) {
          ss += (getter(*r) - mean) * (getter(*r) - mean);
        }
        const double se =
            cell.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        out << m << ',' << s << ',' << fmt_g(mean) << ',' << fmt_g(se) << ','
            << cell.size() << '\n';
      }
    }
  };
  write_metric("plot_mse.csv", [](const MetricsRow& r) { return r.mse; });
  write_metric("plot_mmd2.csv", [](const MetricsRow& r) { return r.mmd2; });
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::vector<std::pair<std::string, std::string>> kvs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) +
                       ": expected key=value");
    }
    kvs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kvs;
}

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "testbed") {
    cfg.testbed = value;
  } else if (key == "variant") {
    cfg.variant = parse_spec_variant(value);
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const std::string& tok : split(value, ',')) {
      const std::string t = trim(tok);
      if (!t.empty()) cfg.methods.push_back(parse_method(t));
    }
  } else if (key == "horizon") {
    cfg.horizon = to_int(key, value);
  } else if (key == "seeds") {
    // A bare count N means seeds 1..N; a comma list is taken verbatim.
    cfg.seeds.clear();
    if (value.find(',') != std::string::npos) {
      for (const std::string& tok : split(value, ',')) {
        const std::string t = trim(tok);
        if (!t.empty()) cfg.seeds.push_back(to_u64(key, t));
      }
    } else {
      const std::uint64_t n = to_u64(key, trim(value));
      for (std::uint64_t s = 1; s <= n; ++s) cfg.seeds.push_back(s);
    }
  } else if (key == "grid") {
    cfg.grid_points = to_int(key, value);
  } else if (key == "test_size") {
    cfg.test_size = to_int(key, value);
  } else if (key == "mse_reps") {
    cfg.mse_reps = to_int(key, value);
  } else if (key == "particles") {
    cfg.particles = to_int(key, value);
  } else if (key == "oracle_diagnostics") {
    cfg.oracle_diagnostics = to_bool(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "acquisition.lambda") {
    cfg.acquisition.lambda = to_double(key, value);
  } else if (key == "acquisition.tau") {
    cfg.acquisition.tau = to_double(key, value);
  } else if (key == "acquisition.kappa") {
    cfg.acquisition.kappa = to_double(key, value);
  } else if (key == "acquisition.mmd_sigma") {
    cfg.acquisition.mmd_sigma = to_double(key, value);
  } else if (key == "eig.outer") {
    cfg.acquisition.eig.outer = to_int(key, value);
  } else if (key == "eig.inner") {
    cfg.acquisition.eig.inner = to_int(key, value);
  } else if (key == "eig.fresh_inner") {
    cfg.acquisition.eig.fresh_inner = to_bool(key, value);
  } else if (key == "proxy.steps") {
    cfg.proxy.steps = to_int(key, value);
  } else if (key == "proxy.lr") {
    cfg.proxy.lr = to_double(key, value);
  } else if (key == "proxy.enriched") {
    cfg.proxy.enriched = to_bool(key, value);
  } else if (key == "poly.cubic_dgp") {
    cfg.poly.cubic_dgp = to_bool(key, value);
  } else if (key == "poly.model_degree") {
    cfg.poly.model_degree = to_int(key, value);
  } else if (key == "poly.noise_var") {
    cfg.poly.noise_var = to_double(key, value);
  } else if (key == "poly.domain_halfwidth") {
    cfg.poly.domain_halfwidth = to_double(key, value);
  } else if (key == "poly.prior_scale") {
    cfg.poly.prior_scale = to_double(key, value);
  } else if (key == "source.num_sources") {
    cfg.source.num_sources = to_int(key, value);
  } else if (key == "source.dim") {
    cfg.source.dim = to_int(key, value);
  } else if (key == "source.log_noise_sd") {
    cfg.source.log_noise_sd = to_double(key, value);
  } else if (key == "source.domain_halfwidth") {
    cfg.source.domain_halfwidth = to_double(key, value);
  } else if (key == "pk.rho") {
    cfg.pk.rho = to_double(key, value);
  } else if (key == "pk.fast_fraction") {
    cfg.pk.fast_fraction = to_double(key, value);
  } else if (key == "pk.dual_minus_sign") {
    cfg.pk.dual_minus_sign = to_bool(key, value);
  } else if (key == "pk.domain_hi") {
    cfg.pk.domain_hi = to_double(key, value);
  } else {
    throw UsageError("unknown config key: " + key);
  }
}

std::vector<std::pair<std::string, std::string>> config_as_kv(
    const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("testbed", cfg.testbed);
  kv.emplace_back("variant", spec_variant_name(cfg.variant));
  std::string methods;
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    if (i > 0) methods += ',';
    methods += method_name(cfg.methods[i]);
  }
  kv.emplace_back("methods", methods);
  kv.emplace_back("horizon", std::to_string(cfg.horizon));
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i > 0) seeds += ',';
    seeds += std::to_string(cfg.seeds[i]);
  }
  // A single seed still needs list syntax, not count syntax.
  if (cfg.seeds.size() == 1) seeds += ',';
  kv.emplace_back("seeds", seeds);
  kv.emplace_back("grid", std::to_string(cfg.grid_points));
  kv.emplace_back("test_size", std::to_string(cfg.test_size));
  kv.emplace_back("mse_reps", std::to_string(cfg.mse_reps));
  kv.emplace_back("particles", std::to_string(cfg.particles));
  kv.emplace_back("oracle_diagnostics",
                  cfg.oracle_diagnostics ? "true" : "false");
  kv.emplace_back("out", cfg.out_dir);
  kv.emplace_back("acquisition.lambda", fmt_g(cfg.acquisition.lambda));
  kv.emplace_back("acquisition.tau", fmt_g(cfg.acquisition.tau));
  kv.emplace_back("acquisition.kappa", fmt_g(cfg.acquisition.kappa));
  kv.emplace_back("acquisition.mmd_sigma", fmt_g(cfg.acquisition.mmd_sigma));
  kv.emplace_back("eig.outer", std::to_string(cfg.acquisition.eig.outer));
  kv.emplace_back("eig.inner", std::to_string(cfg.acquisition.eig.inner));
  kv.emplace_back("eig.fresh_inner",
                  cfg.acquisition.eig.fresh_inner ? "true" : "false");
  kv.emplace_back("proxy.steps", std::to_string(cfg.proxy.steps));
  kv.emplace_back("proxy.lr", fmt_g(cfg.proxy.lr));
  kv.emplace_back("proxy.enriched", cfg.proxy.enriched ? "true" : "false");
  kv.emplace_back("poly.cubic_dgp", cfg.poly.cubic_dgp ? "true" : "false");
  kv.emplace_back("poly.model_degree", std::to_string(cfg.poly.model_degree));
  kv.emplace_back("poly.noise_var", fmt_g(cfg.poly.noise_var));
  kv.emplace_back("poly.domain_halfwidth", fmt_g(cfg.poly.domain_halfwidth));
  kv.emplace_back("poly.prior_scale", fmt_g(cfg.poly.prior_scale));
  kv.emplace_back("source.num_sources",
                  std::to_string(cfg.source.num_sources));
  kv.emplace_back("source.dim", std::to_string(cfg.source.dim));
  kv.emplace_back("source.log_noise_sd", fmt_g(cfg.source.log_noise_sd));
  kv.emplace_back("source.domain_halfwidth",
                  fmt_g(cfg.source.domain_halfwidth));
  kv.emplace_back("pk.rho", fmt_g(cfg.pk.rho));
  kv.emplace_back("pk.fast_fraction", fmt_g(cfg.pk.fast_fraction));
  kv.emplace_back("pk.dual_minus_sign",
                  cfg.pk.dual_minus_sign ? "true" : "false");
  kv.emplace_back("pk.domain_hi", fmt_g(cfg.pk.domain_hi));
  return kv;
}

ExperimentConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read manifest: " + path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw UsageError("malformed manifest " + path + ": " + e.what());
  }
  if (!manifest.contains("config") || !manifest["config"].is_object()) {
    throw UsageError("manifest has no config block: " + path);
  }
  ExperimentConfig cfg;
  for (const auto& [k, v] : manifest["config"].items()) {
    if (!v.is_string()) {
      throw UsageError("manifest config values must be strings: " + k);
    }
    apply_config_kv(cfg, k, v.get<std::string>());
  }
  return cfg;
}

}  // namespace boed
