#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gadop {

// Base of every error raised by the library. Violations found by
// instance validation are data, not errors; these are reserved for
// operations that cannot produce a result.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class OverflowRejected : public Error {
 public:
  using Error::Error;
};

class ModelTooLarge : public Error {
 public:
  ModelTooLarge(std::size_t variables, std::size_t cap)
      : Error("model has " + std::to_string(variables) + " variables, cap is " + std::to_string(cap)),
        variables(variables),
        cap(cap) {}
  std::size_t variables;
  std::size_t cap;
};

// Raised when a plan breaks a first-stage constraint. `constraint` names
// the rule (e.g. "allocation", "subtour", "trip-distance").
class InfeasiblePlan : public Error {
 public:
  InfeasiblePlan(std::string constraint, const std::string& detail)
      : Error("infeasible plan [" + constraint + "]: " + detail), constraint(std::move(constraint)) {}
  std::string constraint;
};

class DecodeMismatch : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class UnsupportedFleet : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

class MissingSection : public Error {
 public:
  using Error::Error;
};

class UnknownCustomer : public Error {
 public:
  using Error::Error;
};

}  // namespace gadop
