#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "commop/polyz.hpp"
#include "commop/rational.hpp"

namespace commop {

enum class Flavor {
  /// Generated by u and u' subject to (u')^2 = R(u), deg R <= 3.
  QuadraticDifferential,
  /// Polynomials in x with the ordinary derivative.
  PolynomialX,
};

class RingSpec;
using RingPtr = std::shared_ptr<const RingSpec>;

/// Coefficient ring description. Rings are compared by value, so two
/// independently built rings with the same R are compatible.
class RingSpec {
 public:
  /// (u')^2 = r3 u^3 + r2 u^2 + r1 u + r0.
  static RingPtr quadratic(const Rational& r3, const Rational& r2, const Rational& r1,
                           const Rational& r0);
  static RingPtr polynomial_x();

  Flavor flavor() const { return flavor_; }
  /// Coefficients of R ascending (r0, r1, r2, r3); all zero for PolynomialX.
  const std::array<Rational, 4>& relation() const { return r_; }
  PolyZ relation_poly() const;  // R as a polynomial (in its own variable)
  /// Name of the generator in printouts: "u" or "x".
  const char* generator_name() const { return flavor_ == Flavor::PolynomialX ? "x" : "u"; }

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    return a.flavor_ == b.flavor_ && a.r_ == b.r_;
  }

 private:
  RingSpec(Flavor f, std::array<Rational, 4> r) : flavor_(f), r_(std::move(r)) {}
  Flavor flavor_;
  std::array<Rational, 4> r_;
};

/// Polynomial in the ring generator with z-polynomial coefficients,
/// index = power of the generator.
using UPoly = std::vector<PolyZ>;

/// Element even(u) + odd(u) u' of a quadratic-differential ring, or a
/// polynomial in x (odd part always empty) for the PolynomialX flavor.
class FuncElem {
 public:
  explicit FuncElem(RingPtr ring);
  FuncElem(RingPtr ring, const PolyZ& constant);
  FuncElem(RingPtr ring, UPoly even, UPoly odd = {});

  /// The generator u (or x).
  static FuncElem generator(const RingPtr& ring);
  /// u'; only for QuadraticDifferential rings.
  static FuncElem generator_prime(const RingPtr& ring);

  const RingPtr& ring() const { return ring_; }
  const UPoly& even() const { return even_; }
  const UPoly& odd() const { return odd_; }
  PolyZ even_coeff(int k) const;
  PolyZ odd_coeff(int k) const;

  FuncElem zero_like() const { return FuncElem(ring_); }
  FuncElem constant_like(const PolyZ& c) const { return FuncElem(ring_, c); }
  bool same_ring(const FuncElem& o) const;

  bool is_zero() const { return even_.empty() && odd_.empty(); }
  /// No dependence on x: a bare z-polynomial.
  bool is_x_free() const { return odd_.empty() && even_.size() <= 1; }
  PolyZ as_constant() const;  // requires is_x_free()
  bool is_z_free() const { return z_degree() <= 0; }
  int z_degree() const;
  int u_degree() const;
  /// Coefficient of z^j, as a z-free element.
  FuncElem coeff_z(int j) const;

  FuncElem operator-() const;
  FuncElem& operator+=(const FuncElem& o);
  FuncElem& operator-=(const FuncElem& o);
  FuncElem& operator*=(const FuncElem& o) { return *this = *this * o; }
  FuncElem& operator*=(const Rational& s);
  friend FuncElem operator+(FuncElem a, const FuncElem& b) { return a += b; }
  friend FuncElem operator-(FuncElem a, const FuncElem& b) { return a -= b; }
  friend FuncElem operator*(const FuncElem& a, const FuncElem& b);
  friend FuncElem operator*(FuncElem a, const Rational& s) { return a *= s; }
  friend FuncElem operator*(const Rational& s, FuncElem a) { return a *= s; }
  friend FuncElem operator*(const FuncElem& a, const PolyZ& p);
  friend bool operator==(const FuncElem& a, const FuncElem& b);

  FuncElem pow(int e) const;

  /// d/dx: u -> u', u' -> R'(u)/2, extended by Leibniz.
  FuncElem derive() const;
  FuncElem derive(int n) const;

  /// Substitute a rational value for z.
  FuncElem at_z(const Rational& z) const;

  /// Largest |rational| appearing anywhere in the element.
  Rational max_abs() const;

  /// Pointwise value at one sample (u, u', z).
  double eval(double u, double uprime, double z) const;

  std::string str() const;

 private:
  RingPtr ring_;
  UPoly even_;
  UPoly odd_;
};

/// Evaluates `e` with z substituted on sampled (u, u') pairs.
///
/// Samples must satisfy (u')^2 = R(u) to within 1e-12 (relative to
/// max(1, |R(u)|)); throws InvalidSamples otherwise.
std::vector<double> eval_grid(const FuncElem& e, const Rational& z, std::span<const double> u,
                              std::span<const double> uprime);

}  // namespace commop
