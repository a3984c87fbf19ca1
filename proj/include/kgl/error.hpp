#pragma once

#include <stdexcept>
#include <string>

namespace kgl {

// Precondition violations raise std::invalid_argument directly. The types
// below carry the categories the CLI maps onto exit codes.

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or a solver blow-up.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kgl
