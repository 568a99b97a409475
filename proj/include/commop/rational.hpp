#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace commop {

/// Exact rational number in canonical form (denominator > 0, lowest terms).
///
/// Thin value wrapper over GMP's mpq_class. The wrapper exists so that
/// expression templates never leak into `auto` variables and so that every
/// value is canonical on construction.
class Rational {
 public:
  Rational() = default;
  Rational(int n) : v_(n) {}  // NOLINT: implicit by design for literals
  Rational(long n) : v_(n) {}  // NOLINT
  Rational(long long n) : v_(mpz_class(std::to_string(n))) {}  // NOLINT
  Rational(long n, long d);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rational(const mpz_class& n) : v_(n) {}

  /// Parses "p", "-p", "p/q" or a finite decimal such as "0.25".
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  double to_double() const { return v_.get_d(); }

  /// "p/q", or "p" when q = 1.
  std::string str() const { return v_.get_str(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Integer power; negative exponents invert (throws on 0^-n).
  Rational pow(int e) const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_{0};
};

/// Binomial coefficient as an exact rational.
Rational binomial(int n, int k);

}  // namespace commop

template <>
struct std::hash<commop::Rational> {
  size_t operator()(const commop::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
