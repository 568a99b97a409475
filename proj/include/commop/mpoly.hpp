#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "commop/rational.hpp"

namespace commop {

/// Sparse monomial: (variable id, exponent) pairs sorted by id, exponents > 0.
using Monomial = std::vector<std::pair<int, int>>;

Monomial monomial_mul(const Monomial& a, const Monomial& b);
int monomial_exponent(const Monomial& m, int var);
Monomial monomial_without(const Monomial& m, int var);

/// Sparse multivariate polynomial over the rationals with integer-indexed
/// variables. Zero coefficients are never stored.
class MPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  MPoly() = default;
  MPoly(Rational constant);  // NOLINT
  MPoly(int constant) : MPoly(Rational(constant)) {}  // NOLINT

  static MPoly var(int id, int exponent = 1);
  static MPoly term(const Rational& c, Monomial m);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  std::set<int> variables() const;
  bool contains(int var) const;
  int degree_in(int var) const;
  int total_degree() const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const Rational& s);
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Rational& s) { return a *= s; }
  friend MPoly operator*(const Rational& s, MPoly a) { return a *= s; }
  friend bool operator==(const MPoly&, const MPoly&) = default;

  MPoly pow(int e) const;

  /// Partial derivative with respect to one variable.
  MPoly partial(int var) const;
  /// Replace a variable by a polynomial.
  MPoly substitute(int var, const MPoly& value) const;
  /// Coefficients of powers of `var`: result[k] multiplies var^k.
  std::vector<MPoly> coefficients_in(int var) const;

  Rational max_abs() const;

  std::string str(const std::function<std::string(int)>& name) const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

}  // namespace commop
