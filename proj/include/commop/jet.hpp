#pragma once

#include <memory>
#include <string>
#include <vector>

#include "commop/mpoly.hpp"
#include "commop/rational.hpp"

namespace commop {

class JetRing;
using JetRingPtr = std::shared_ptr<const JetRing>;

/// Differential polynomial ring in named function symbols S with derivative
/// towers S, S1, S2, ... and named constants (total derivative zero).
///
/// Jet variable (symbol s, order k) has MPoly id k * symbol_count() + s.
class JetRing {
 public:
  static JetRingPtr make(std::vector<std::string> functions, std::vector<std::string> constants = {});

  int symbol_count() const { return static_cast<int>(names_.size()); }
  int symbol(const std::string& name) const;
  bool is_constant(int symbol) const { return constant_[static_cast<size_t>(symbol)]; }
  const std::string& name(int symbol) const { return names_[static_cast<size_t>(symbol)]; }

  int var(int symbol, int order = 0) const;
  int var_symbol(int id) const { return id % symbol_count(); }
  int var_order(int id) const { return id / symbol_count(); }
  /// "V", "V1", "V2", ... ; constants print bare.
  std::string var_name(int id) const;

 private:
  JetRing() = default;
  std::vector<std::string> names_;
  std::vector<bool> constant_;
};

/// Element of a jet ring: a differential polynomial.
class JetElem {
 public:
  explicit JetElem(JetRingPtr ring, MPoly p = {}) : ring_(std::move(ring)), p_(std::move(p)) {}

  /// The k-th x-derivative of a named symbol.
  static JetElem symbol(const JetRingPtr& ring, const std::string& name, int order = 0);

  const JetRingPtr& ring() const { return ring_; }
  const MPoly& poly() const { return p_; }

  JetElem zero_like() const { return JetElem(ring_); }
  JetElem constant_like(const Rational& c) const { return JetElem(ring_, MPoly(c)); }
  bool same_ring(const JetElem& o) const { return ring_ == o.ring_; }
  bool is_zero() const { return p_.is_zero(); }

  JetElem operator-() const { return JetElem(ring_, -p_); }
  JetElem& operator+=(const JetElem& o);
  JetElem& operator-=(const JetElem& o);
  JetElem& operator*=(const Rational& s) { p_ *= s; return *this; }
  friend JetElem operator+(JetElem a, const JetElem& b) { return a += b; }
  friend JetElem operator-(JetElem a, const JetElem& b) { return a -= b; }
  friend JetElem operator*(const JetElem& a, const JetElem& b);
  friend JetElem operator*(JetElem a, const Rational& s) { return a *= s; }
  friend JetElem operator*(const Rational& s, JetElem a) { return a *= s; }
  friend bool operator==(const JetElem& a, const JetElem& b) {
    return a.same_ring(b) && a.p_ == b.p_;
  }

  /// Total x-derivative: D(S_k) = S_{k+1}, D(constant) = 0.
  JetElem derive() const;
  JetElem derive(int n) const;

  /// Replaces function symbol `name` by `value`, and each S_k by D^k(value).
  JetElem substitute(const std::string& name, const JetElem& value) const;

  /// True if any jet variable of the symbol occurs.
  bool depends_on(const std::string& name) const;

  Rational max_abs() const { return p_.max_abs(); }
  std::string str() const;

 private:
  JetRingPtr ring_;
  MPoly p_;
};

}  // namespace commop
