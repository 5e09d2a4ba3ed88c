#pragma once

#include <stdexcept>
#include <string>

namespace resolvon {

// Bad parameters, malformed documents, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that is well-formed but exceeds the dense desk-scale limits
// (ambient dimension, type-class size, enumeration counts, round budgets).
class GuardrailError : public InputError {
 public:
  using InputError::InputError;
};

// The eigensolver or another numerical kernel failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace resolvon
