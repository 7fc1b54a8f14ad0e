#pragma once

#include <stdexcept>
#include <string>

namespace aoigame {

// Invalid inputs: non-positive rates, bad indices, malformed parameters.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for numerical failures surfaced by the solvers.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Raised when an iterate exceeds the rate cap. Callers that compute ratios
// map this to an "unbounded" outcome.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Observed statistic is impossible under the model (e.g. AoI below the
// single-platform floor).
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoigame
