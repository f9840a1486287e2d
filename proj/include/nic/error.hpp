#pragma once

#include <stdexcept>
#include <string>

namespace nic {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input (shape, Hermiticity, unitarity, thresholds).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A dimension exceeded the dense desk-scale limits.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its cap. Carries the residual reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace nic
