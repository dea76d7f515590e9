#pragma once

#include <stdexcept>
#include <string>

namespace onco {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration: bad file syntax, unknown key, or a parameter
/// outside its admissible range. Raised once at load, never mid-solve.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The explicit scheme left its stability region (velocity bound exceeded,
/// or a state value went more negative than the clamp tolerance).
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf appeared in a state or adjoint field.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// API contract violation (e.g. feeding a decimated trajectory to the
/// adjoint solver).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace onco
