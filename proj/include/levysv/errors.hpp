#pragma once

#include <stdexcept>
#include <string>

namespace levysv {

// Adaptive quadrature ran out of budget before reaching the requested
// tolerance. Carries what was achieved so callers can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_rel_tol,
                  std::size_t evaluations)
      : std::runtime_error(what),
        achieved_rel_tol(achieved_rel_tol),
        evaluations(evaluations) {}

  double achieved_rel_tol;
  std::size_t evaluations;
};

// Parameter combination outside the regime where the requested quantity is
// defined (e.g. no stationary law).
class InvalidRegimeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Query exactly at a scaling threshold, where the limit order is ambiguous.
class ThresholdError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Too few usable data points for an estimator.
class InsufficientDataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace levysv
