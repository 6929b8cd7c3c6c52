#pragma once

#include <stdexcept>
#include <string>

namespace hcb {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input files or scenario parameters. CLI maps this to exit code 2.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A problem exceeded a configured size cap. CLI maps this to exit code 3.
struct GuardError : Error {
  explicit GuardError(const std::string& msg) : Error(msg) {}
};

// Violated preconditions or inconsistent operands.
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Failed numerical procedure (singular fit, non-converged solve, ...).
struct NumericalError : Error {
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

}  // namespace hcb
