#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "commop/rational.hpp"

namespace commop {

/// Univariate polynomial in the spectral parameter z over the rationals.
///
/// Coefficients are stored in ascending degree with no trailing zeros, so the
/// zero polynomial is the empty sequence and has degree -1.
class PolyZ {
 public:
  PolyZ() = default;
  PolyZ(Rational constant);  // NOLINT: constants promote implicitly
  PolyZ(int constant) : PolyZ(Rational(constant)) {}  // NOLINT
  explicit PolyZ(std::vector<Rational> ascending);

  static PolyZ z() { return monomial(Rational(1), 1); }
  static PolyZ monomial(const Rational& c, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(int k) const;
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  PolyZ operator-() const;
  PolyZ& operator+=(const PolyZ& o);
  PolyZ& operator-=(const PolyZ& o);
  PolyZ& operator*=(const PolyZ& o) { return *this = *this * o; }
  PolyZ& operator*=(const Rational& s);
  friend PolyZ operator+(PolyZ a, const PolyZ& b) { return a += b; }
  friend PolyZ operator-(PolyZ a, const PolyZ& b) { return a -= b; }
  friend PolyZ operator*(const PolyZ& a, const PolyZ& b);
  friend PolyZ operator*(PolyZ a, const Rational& s) { return a *= s; }
  friend PolyZ operator*(const Rational& s, PolyZ a) { return a *= s; }
  friend bool operator==(const PolyZ&, const PolyZ&) = default;

  Rational eval(const Rational& z) const;
  double eval(double z) const;

  /// Euclidean division; throws on division by zero.
  std::pair<PolyZ, PolyZ> divmod(const PolyZ& d) const;
  /// Monic gcd (zero if both are zero).
  static PolyZ gcd(PolyZ a, PolyZ b);
  PolyZ monic() const;

  /// Largest |coefficient|.
  Rational max_abs() const;

  /// Human-readable form, highest degree first, e.g. "z^3 + 1/2*z^2 - 1".
  std::string str(const std::string& var = "z") const;
  friend std::ostream& operator<<(std::ostream& os, const PolyZ& p) { return os << p.str(); }

 private:
  void trim();
  std::vector<Rational> c_;
};

}  // namespace commop
