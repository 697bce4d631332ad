#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boed/acquisition.hpp"
#include "boed/diagnostics.hpp"
#include "boed/inference.hpp"
#include "boed/testbeds.hpp"

namespace boed {

// Fully resolved description of one experiment run. Every field that affects
// the emitted rows round-trips through the manifest.
struct ExperimentConfig {
  std::string testbed = "poly";  // poly | source | pk
  SpecVariant variant = SpecVariant::mis;
  std::vector<Method> methods = {Method::random, Method::bad, Method::ri,
                                 Method::ridea};
  AcquisitionConfig acquisition;
  ProxyConfig proxy;
  int horizon = 0;  // 0 = testbed default
  std::vector<std::uint64_t> seeds = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                      11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  int grid_points = 201;  // candidate grid points per axis
  int test_size = 200;    // designs in the held-out test sample
  int mse_reps = 10;      // fresh observations per test design
  int particles = 2000;   // particle count for non-conjugate testbeds
  bool oracle_diagnostics = false;
  std::string out_dir = "out";
  PolyConfig poly;
  SourceConfig source;
  PkConfig pk;
};

// Throws UsageError on the first violated constraint.
void validate_config(const ExperimentConfig& cfg);

struct MetricsRow {
  std::uint64_t seed = 0;
  int step = 0;
  std::string method;
  double mse = 0.0;
  double mmd2 = 0.0;
  Design design;
  double score = 0.0;
  bool has_diag = false;  // oracle-mode decomposition present
  double b = 0.0, c = 0.0, a = 0.0, a_hat = 0.0;
};

// Outcome of one (seed, method) cell; failed cells keep the run alive.
struct CellStatus {
  std::uint64_t seed = 0;
  std::string method;
  bool ok = true;
  std::string message;
};

struct RunResult {
  std::vector<MetricsRow> rows;
  std::vector<CellStatus> cells;

  [[nodiscard]] bool all_ok() const {
    for (const CellStatus& c : cells) {
      if (!c.ok) return false;
    }
    return true;
  }
};

// Runs the sequential design loop for every (seed, method) cell and writes
// metrics.csv (incrementally), plot summaries, and manifest.json under
// cfg.out_dir. Streams for the test sample and the step-t DGP noise depend
// only on (seed, t), so rows are paired across methods and sweep values.
RunResult run_experiment(const ExperimentConfig& cfg);

// Double average over test designs and `reps` fresh observations each of
// (fhat(xi) - y)^2. Deterministic given the stream.
double compute_mse(const ScalarFn& fhat, const SampleSet& test,
                   const std::function<double(const Design&, RngStream&)>& dgp,
                   int reps, RngStream rng);

// Runs run_experiment once per value of `param` ("lambda" or "tau"), sharing
// seeds, into out_dir/<param>=<value>/ subdirectories.
std::vector<RunResult> sweep(const ExperimentConfig& cfg,
                             const std::string& param,
                             const std::vector<double>& values);

// Writes plot_mse.csv and plot_mmd2.csv (method,step,mean,se,n) into dir.
void emit_plotdata(const std::vector<MetricsRow>& rows,
                   const std::string& dir);

// ---- configuration plumbing --------------------------------------------------

// Flat `key=value` lines; '#' starts a comment; keys are dotted paths.
std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path);

// Applies one dotted key; unknown keys are usage errors. `seeds` accepts a
// count or an explicit comma-separated list.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

// Every (key, value) pair above, fully resolved; feeding these back through
// apply_config_kv reproduces cfg exactly.
std::vector<std::pair<std::string, std::string>> config_as_kv(
    const ExperimentConfig& cfg);

// Reads the config block of a previously written manifest.json.
ExperimentConfig config_from_manifest(const std::string& path);

}  // namespace boed
