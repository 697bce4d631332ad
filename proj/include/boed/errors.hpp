#pragma once

#include <stdexcept>

namespace boed {

// Caller violated a documented precondition (bad dimensions, empty inputs,
// out-of-range parameters, malformed config).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical operation failed at runtime: non-SPD matrix, degenerate
// particle weights, non-finite loss, non-finite estimate.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace boed
