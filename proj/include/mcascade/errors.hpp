#pragma once

#include <stdexcept>

namespace mcascade {

/// Malformed input: bad symbol, probability vector off by more than the
/// tolerance, mismatched alphabets, unknown config keys, and the like.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or depth guard was exceeded; retry with smaller parameters.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A query hit a zero-mass cylinder (point outside the measure's support).
struct support_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A regime precondition does not hold (e.g. a dimension estimator was asked
/// to run on a pair that is not regular).
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcascade
