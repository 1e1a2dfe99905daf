#pragma once

#include <stdexcept>
#include <string>

namespace fdrlab {

// Argument outside the mathematical domain of an operation (q outside (0,1),
// zeta <= 1, alpha outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A scale estimate or argument equal to zero. p-values are undefined there.
class DegenerateScaleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A bracketing root finder could not locate a sign change.
class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: configuration documents, data files, tables.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fdrlab
