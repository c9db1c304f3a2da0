#pragma once

#include <stdexcept>
#include <string>

namespace steinmm {

// Argument outside the mathematical domain of an operation (Γ pole, moment
// that does not exist, parameter out of range).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A numerical routine could not reach its tolerance. Carries the best
// estimate so callers may decide whether it is usable anyway.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

// Estimator denominator is zero, negative where positivity is required, or
// non-finite; also used for vanishing ϑ/η functionals in the asymptotics.
class DegenerateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requested evaluation route is not available (e.g. no closed form registered).
class UnsupportedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Every candidate in an optimisation bracket was infeasible.
class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FixtureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (CSV rows, weight specs, CLI parameters).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace steinmm
