#include "commop/polyz.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace commop {

PolyZ::PolyZ(Rational constant) {
  if (!constant.is_zero()) c_.push_back(std::move(constant));
}

PolyZ::PolyZ(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

PolyZ PolyZ::monomial(const Rational& c, int degree) {
  if (degree < 0) throw std::invalid_argument("PolyZ::monomial: negative degree");
  PolyZ p;
  if (c.is_zero()) return p;
  p.c_.assign(static_cast<size_t>(degree) + 1, Rational(0));
  p.c_.back() = c;
  return p;
}

void PolyZ::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational PolyZ::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<size_t>(k)];
}

PolyZ PolyZ::operator-() const {
  PolyZ r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

PolyZ& PolyZ::operator+=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

PolyZ& PolyZ::operator-=(const PolyZ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

PolyZ& PolyZ::operator*=(const Rational& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
  PolyZ r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.c_.size() == 1) return b * a.c_[0];
  if (b.c_.size() == 1) return a * b.c_[0];
  std::vector<mpq_class> acc(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i].raw() * b.c_[j].raw();
  }
  r.c_.reserve(acc.size());
  for (auto& v : acc) r.c_.emplace_back(std::move(v));
  r.trim();
  return r;
}

Rational PolyZ::eval(const Rational& z) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double PolyZ::eval(double z) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->to_double();
  return acc;
}

std::pair<PolyZ, PolyZ> PolyZ::divmod(const PolyZ& d) const {
  if (d.is_zero()) throw std::domain_error("PolyZ::divmod: division by zero polynomial");
  PolyZ q, r = *this;
  const Rational lead = d.leading();
  while (!r.is_zero() && r.degree() >= d.degree()) {
    const int shift = r.degree() - d.degree();
    const Rational f = r.leading() / lead;
    const PolyZ t = monomial(f, shift);
    q += t;
    r -= t * d;
  }
  return {q, r};
}

PolyZ PolyZ::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / leading());
}

PolyZ PolyZ::gcd(PolyZ a, PolyZ b) {
  while (!b.is_zero()) {
    PolyZ r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Rational PolyZ::max_abs() const {
  Rational m(0);
  for (const auto& c : c_) m = std::max(m, c.abs());
  return m;
}

std::string PolyZ::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[static_cast<size_t>(k)];
    if (c.is_zero()) continue;
    Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag;
    } else {
      if (!mag.is_one()) os << mag << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

}  // namespace commop
