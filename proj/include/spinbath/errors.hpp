#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Invalid or inconsistent user input (config files, CLI flags, unit names).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during propagation or fitting (trace drift, no decay, ...).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested problem exceeds a configured size budget.
struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spinbath
