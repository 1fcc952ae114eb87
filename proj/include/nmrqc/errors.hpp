#pragma once

#include <stdexcept>
#include <string>

namespace nmrqc {

/// Malformed input: unknown names, out-of-range indices, bad config documents.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical contract was broken (non-unitary matrix, non-normalized state).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters violate the physical machine constraints.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested integration method cannot handle the elementary operation.
class MethodError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmrqc
