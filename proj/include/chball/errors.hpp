#pragma once

#include <stdexcept>
#include <string>

namespace chball {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, zero vectors, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A vector that does not project into the open unit ball.
class NotInBall : public Error {
 public:
  using Error::Error;
};

// A matrix failed an SU(n,1) or unitarity invariant. Carries the offending
// invariant name and its measured residual.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, double residual, const std::string& what)
      : Error(what), invariant_(std::move(invariant)), residual_(residual) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string invariant_;
  double residual_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Work bound exceeded (pigeonhole enumeration guard).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace chball
