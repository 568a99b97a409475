#pragma once

#include <algorithm>
#include <concepts>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "commop/errors.hpp"
#include "commop/rational.hpp"

namespace commop {

/// What an operator coefficient ring must provide.
template <class E>
concept OperatorCoefficient = requires(const E& a, const E& b, const Rational& s) {
  { a + b } -> std::convertible_to<E>;
  { a - b } -> std::convertible_to<E>;
  { a * b } -> std::convertible_to<E>;
  { a * s } -> std::convertible_to<E>;
  { -a } -> std::convertible_to<E>;
  { a.derive() } -> std::convertible_to<E>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.zero_like() } -> std::convertible_to<E>;
  { a.constant_like(s) } -> std::convertible_to<E>;
  { a.same_ring(b) } -> std::convertible_to<bool>;
  { a.max_abs() } -> std::convertible_to<Rational>;
  { a.str() } -> std::convertible_to<std::string>;
};

/// Ordinary differential operator sum_i c_i d^i with coefficients stored to
/// the left of the derivative powers. Trailing zero coefficients are trimmed,
/// so the zero operator has order -1.
template <OperatorCoefficient E>
class DiffOp {
 public:
  explicit DiffOp(const E& proto) : zero_(proto.zero_like()) {}
  DiffOp(const E& proto, std::vector<E> coeffs) : zero_(proto.zero_like()), c_(std::move(coeffs)) {
    for (const auto& c : c_) {
      if (!c.same_ring(zero_)) throw RingMismatch("operator coefficient");
    }
    trim();
  }

  static DiffOp identity(const E& proto) { return multiply(proto.constant_like(Rational(1))); }
  /// d^n.
  static DiffOp derivation(const E& proto, int n = 1) {
    std::vector<E> c(static_cast<size_t>(n) + 1, proto.zero_like());
    c.back() = proto.constant_like(Rational(1));
    return DiffOp(proto, std::move(c));
  }
  /// Multiplication by f.
  static DiffOp multiply(const E& f) { return DiffOp(f, {f}); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<E>& coefficients() const { return c_; }
  const E& coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(i)] : zero_;
  }
  const E& leading() const { return c_.empty() ? zero_ : c_.back(); }
  const E& zero_elem() const { return zero_; }

  /// Largest |rational| among all coefficients; zero iff the operator is zero.
  Rational residual() const {
    Rational m(0);
    for (const auto& c : c_) m = std::max(m, c.max_abs());
    return m;
  }

  DiffOp operator-() const {
    DiffOp r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }
  DiffOp& operator+=(const DiffOp& o) {
    check(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    check(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  DiffOp& operator*=(const Rational& s) {
    for (auto& c : c_) c = c * s;
    trim();
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, const Rational& s) { return a *= s; }
  friend DiffOp operator*(const Rational& s, DiffOp a) { return a *= s; }
  /// Composition A o B.
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b) { return compose(a, b); }
  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }

  /// (f d^i) o (g d^j) = sum_k C(i,k) f d^k(g) d^(i+j-k).
  static DiffOp compose(const DiffOp& a, const DiffOp& b) {
    a.check(b);
    if (a.is_zero() || b.is_zero()) return DiffOp(a.zero_);
    const int na = a.order(), nb = b.order();
    std::vector<E> out(static_cast<size_t>(na + nb) + 1, a.zero_);
    std::vector<E> derivs;
    for (int j = 0; j <= nb; ++j) {
      const E& g = b.c_[static_cast<size_t>(j)];
      if (g.is_zero()) continue;
      derivs.assign(1, g);
      for (int k = 1; k <= na; ++k) derivs.push_back(derivs.back().derive());
      for (int i = 0; i <= na; ++i) {
        const E& f = a.c_[static_cast<size_t>(i)];
        if (f.is_zero()) continue;
        for (int k = 0; k <= i; ++k) {
          const E& dg = derivs[static_cast<size_t>(k)];
          if (dg.is_zero()) continue;
          E term = f * dg;
          if (k > 0) term = term * binomial(i, k);
          auto& slot = out[static_cast<size_t>(i + j - k)];
          slot = slot + term;
        }
      }
    }
    return DiffOp(a.zero_, std::move(out));
  }

  DiffOp pow(int n) const {
    DiffOp r = identity(zero_);
    for (int i = 0; i < n; ++i) r = compose(r, *this);
    return r;
  }

  /// Deterministic text form, ascending in the derivative power.
  std::string str() const {
    if (c_.empty()) return "0\n";
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      os << "d^" << i << ": " << c_[i].str() << "\n";
    }
    return os.str();
  }

 private:
  void check(const DiffOp& o) const {
    if (!zero_.same_ring(o.zero_)) throw RingMismatch("operator");
  }
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  E zero_;
  std::vector<E> c_;
};

template <OperatorCoefficient E>
DiffOp<E> compose(const DiffOp<E>& a, const DiffOp<E>& b) {
  return DiffOp<E>::compose(a, b);
}

/// [A, B] = AB - BA.
template <OperatorCoefficient E>
DiffOp<E> commutator(const DiffOp<E>& a, const DiffOp<E>& b) {
  return compose(a, b) - compose(b, a);
}

/// <A, B> = AB + BA.
template <OperatorCoefficient E>
DiffOp<E> anticommutator(const DiffOp<E>& a, const DiffOp<E>& b) {
  return compose(a, b) + compose(b, a);
}

/// Formal adjoint: sum c_i d^i -> sum (-1)^i d^i o c_i, re-normalized.
template <OperatorCoefficient E>
DiffOp<E> adjoint(const DiffOp<E>& a) {
  if (a.is_zero()) return a;
  std::vector<E> out(static_cast<size_t>(a.order()) + 1, a.zero_elem());
  for (int i = 0; i <= a.order(); ++i) {
    E d = a.coeff(i);
    const Rational sign(i % 2 == 0 ? 1 : -1);
    for (int k = 0; k <= i; ++k) {
      if (k > 0) d = d.derive();
      if (d.is_zero()) break;
      auto& slot = out[static_cast<size_t>(i - k)];
      slot = slot + d * (sign * binomial(i, k));
    }
  }
  return DiffOp<E>(a.zero_elem(), std::move(out));
}

/// Polynomial p(L) = sum_k coeffs[k] L^k with constant coefficients.
template <OperatorCoefficient E>
DiffOp<E> polynomial_in(const std::vector<Rational>& coeffs, const DiffOp<E>& l) {
  DiffOp<E> out(l.zero_elem());
  DiffOp<E> power = DiffOp<E>::identity(l.zero_elem());
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) power = compose(power, l);
    if (!coeffs[k].is_zero()) out += power * coeffs[k];
  }
  return out;
}

/// sum_j T_j o L^j, powers of L composed on the right. L must not involve z.
template <OperatorCoefficient E>
  requires requires(const E& e) { { e.is_z_free() } -> std::convertible_to<bool>; }
DiffOp<E> subst_z(const std::map<int, DiffOp<E>>& templates, const DiffOp<E>& l) {
  for (const auto& c : l.coefficients()) {
    if (!c.is_z_free()) throw Error("subst_z: z appears in the substituted operator");
  }
  DiffOp<E> out(l.zero_elem());
  if (templates.empty()) return out;
  const int top = templates.rbegin()->first;
  DiffOp<E> power = DiffOp<E>::identity(l.zero_elem());
  for (int j = 0; j <= top; ++j) {
    if (j > 0) power = compose(power, l);
    auto it = templates.find(j);
    if (it != templates.end() && !it->second.is_zero()) out += compose(it->second, power);
  }
  return out;
}

}  // namespace commop
