#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surfhol {

/// Caller supplied inconsistent arguments (mismatched group tags, unknown names,
/// bad dimensions). The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematically undefined request, e.g. log at the cut locus.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Source/target mismatch when composing plaquettes.
class ComposabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The crossed module lacks a capability the operation needs (e.g. invertible tau).
class UnsupportedInstance : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Numerical failure while evaluating coefficients or stepping an ODE.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace surfhol
