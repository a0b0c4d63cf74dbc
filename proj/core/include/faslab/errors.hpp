#pragma once

#include <stdexcept>
#include <string>

namespace faslab {

// Malformed or unknown experiment configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::string message, int line = 0)
      : std::runtime_error(std::move(message)), line(line) {}
  int line;
};

// A structural guarantee of the model failed at runtime (e.g. the selected-port
// rate falling below the fixed-port rate). The CLI maps this to exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace faslab
