#pragma once

#include <stdexcept>
#include <string>

namespace tasep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A spectral parameter hit the pole at xi = 1.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Request would exceed a factorial or tensor-size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A random evaluation point made some denominator vanish.
class DegeneratePointError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best, double delta, int points)
      : Error(what), best_value(best), last_delta(delta), points(points) {}

  double best_value;
  double last_delta;
  int points;
};

}  // namespace tasep
