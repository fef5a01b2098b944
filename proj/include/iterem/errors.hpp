#pragma once

#include <stdexcept>
#include <string>

namespace iterem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// Not enough stored values (or grid coverage) for the requested operation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// The declared envelope does not make the weighted series/integral converge.
class NonSummableError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// An iterate left the domain U, i.e. it is no longer in the invariant set.
class DomainViolationError : public Error {
 public:
  using Error::Error;
};

// Quadrature could not reach the requested tolerance. The best-effort value
// and its error estimate are kept so callers can still report them.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, double best_value, double best_error)
      : Error(what), best_value_(best_value), best_error_(best_error) {}

  double best_value() const noexcept { return best_value_; }
  double best_error() const noexcept { return best_error_; }

 private:
  double best_value_;
  double best_error_;
};

}  // namespace iterem
