#pragma once

#include <stdexcept>
#include <string>

namespace jbt {

/// Operands live in different spaces or a block has the wrong shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on the mathematical input failed (order relation,
/// Peirce membership, symmetry, unitarity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UndefinedSupportError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quantity that must be nonnegative came out below tolerance.
class PositivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two equivalent characterizations disagreed beyond tolerance.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace jbt
