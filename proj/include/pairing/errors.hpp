#pragma once

#include <stdexcept>
#include <string>

namespace pairing {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Argument outside the domain of a formula or operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

// Sector or operator would exceed the configured dimension cap.
class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

// An operator term maps a basis state out of the enumerated sector.
class ConstraintError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "constraint"; }
};

// Iterative solver failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "convergence"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

}  // namespace pairing
