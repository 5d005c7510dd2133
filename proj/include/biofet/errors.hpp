#pragma once

#include <stdexcept>
#include <string>

namespace biofet {

// Operation not available with the given configuration (e.g. bias current
// without a gate voltage).
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulation input too short for the requested estimate.
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config-file parse or validation failure, carrying source location.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message) {}
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

} // namespace biofet
