#pragma once

#include <functional>
#include <vector>

#include "boed/numerics.hpp"
#include "boed/testbeds.hpp"

namespace boed {

using ScalarFn = std::function<double(const Design&)>;

// Test-risk split for a fitted predictor fhat against the class-optimal
// predictor fbar and the true mean fstar, averaged over a shared sample:
//   total = misspec_bias + estim_bias + amplification  (exact algebra).
struct DecompositionReport {
  double misspec_bias = 0.0;   // mean (fbar - fstar)^2
  double estim_bias = 0.0;     // mean (fhat - fbar)^2
  double amplification = 0.0;  // 2 mean (fbar - fstar)(fhat - fbar)
  double total = 0.0;          // mean (fhat - fstar)^2
  int count = 0;
};

DecompositionReport decompose(const ScalarFn& fhat, const ScalarFn& fbar,
                              const ScalarFn& fstar, const SampleSet& test);

// mean over the training designs of (fhat - fbar)(fbar - fstar); positive
// values shrink the risk bound (de-amplification).
double amplification_term(const ScalarFn& fhat, const ScalarFn& fbar,
                          const ScalarFn& fstar, const SampleSet& train);

// Least-squares projection of fstar onto the feature class, uniform weights
// over the grid (normal equations). Deterministic.
LinearFn best_in_class(const ScalarFn& fstar, const LinearModel& cls,
                       const SampleSet& grid);
LinearFn best_in_class(const Testbed& tb, const LinearModel& cls,
                       const SampleSet& grid);

// Constants entering the finite-class generalization bound.
struct BoundInputs {
  double c_inf = 1.0;  // sup density ratio test/train, >= 1
  double b_inf = 0.0;  // sup |fbar - fstar|
  double y_inf = 1.0;  // bound on |predictions| and |outcomes|
  double a_hat = 0.0;  // training-sample amplification term
  int class_size = 2;  // |F|, finite hypothesis count
  int n = 1;           // training-sample size
  double delta = 0.05; // failure probability
};

// Branches on the sign of a_hat:
//   a_hat <  0: c_inf * (b_inf^2 + 224 y_inf^2 log(|F|/delta) / (3n) - 2 a_hat)
//   a_hat >= 0: c_inf * (b_inf^2 + 128 y_inf^2 log(|F|/delta) / (3n) - sqrt(3) a_hat)
double bound_rhs(const BoundInputs& in);

// tau0 / b_inf + c * b_inf, the deviation level at which |fhat - fbar|
// certifies pointwise de-amplification at level tau0 (c >= 2).
double deamp_threshold(double tau0, double b_inf, double c = 2.0);

// Indices of grid points where (fhat - fbar)(fbar - fstar) >= tau0.
std::vector<int> deamp_region_exact(const ScalarFn& fhat, const ScalarFn& fbar,
                                    const ScalarFn& fstar,
                                    const SampleSet& grid, double tau0);

// Indices of grid points where |fhat - ref| >= threshold; ref is fbar, or a
// proxy g within sup-distance tau2 of fbar (then pass threshold + tau2).
std::vector<int> deamp_region_approx(const ScalarFn& fhat, const ScalarFn& ref,
                                     const SampleSet& grid, double threshold);

// sup over grid cells of d_test / d_train with uniform d_test and an
// add-one-smoothed nearest-cell histogram for d_train.
double density_ratio_sup(const SampleSet& train, const SampleSet& grid);

}  // namespace boed
