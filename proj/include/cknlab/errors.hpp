#pragma once

#include <stdexcept>
#include <string>

namespace cknlab {

/// Which admissibility constraint a parameter set violated.
enum class Constraint {
  dimension,   // n integer >= 2
  p_range,     // 1 < p < n
  a_range,     // a < (n-p)/p
  b_range,     // a <= b <= a+1
  c_positive,  // c > 0
};

const char* to_string(Constraint c);

/// Raised by parameter validation; names the violated constraint.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(Constraint which, const std::string& what)
      : std::invalid_argument(what), which_(which) {}
  Constraint which() const noexcept { return which_; }

 private:
  Constraint which_;
};

/// Operation requested at the Hardy endpoint d = 0 where it is undefined.
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad grid, field, or argument shape.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// lambda >= lambda_1 along the requested direction: Phi - lambda J <= 0.
class QuotientSignError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or quadrature routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace cknlab
