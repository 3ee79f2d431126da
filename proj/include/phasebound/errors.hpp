#pragma once

#include <stdexcept>
#include <string>

namespace phasebound {

/// Inputs that do not fit together: mismatched rings, bad shapes, bad indices.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size limit (|A|, closure size, search space) was exceeded.
class SizeCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A value table that fails the quadratic validity check.
class NotQuadraticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// classify_island was handed a phase that still has obstruction strata.
class NotAnIslandError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal consistency check failed (island preservation, kernel identity).
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace phasebound
