#pragma once

#include <stdexcept>
#include <string>

namespace commop {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different coefficient rings.
class RingMismatch : public Error {
 public:
  RingMismatch() : Error("ring mismatch") {}
  explicit RingMismatch(const std::string& what) : Error("ring mismatch: " + what) {}
};

/// A family constructor was given parameters outside the family's domain.
class FamilyConstraintError : public Error {
 public:
  using Error::Error;
};

/// Numeric input does not satisfy a required relation.
class InvalidSamples : public Error {
 public:
  using Error::Error;
};

/// The Q ansatz did not have exactly one solution.
class NullityError : public Error {
 public:
  NullityError(const std::string& what, size_t nullity) : Error(what), nullity_(nullity) {}
  size_t nullity() const { return nullity_; }

 private:
  size_t nullity_;
};

/// A recurrence hit a zero denominator (resonant parameters).
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// The curve functional still depends on x, so Q does not satisfy its equation.
class CurveError : public Error {
 public:
  using Error::Error;
};

/// A simulation or command configuration is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A simulated field became NaN or infinite.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

}  // namespace commop
