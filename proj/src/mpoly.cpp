#include "commop/mpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace commop {

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

int monomial_exponent(const Monomial& m, int var) {
  for (const auto& [v, e] : m) {
    if (v == var) return e;
  }
  return 0;
}

Monomial monomial_without(const Monomial& m, int var) {
  Monomial r;
  for (const auto& p : m) {
    if (p.first != var) r.push_back(p);
  }
  return r;
}

MPoly::MPoly(Rational constant) {
  if (!constant.is_zero()) terms_.emplace(Monomial{}, std::move(constant));
}

MPoly MPoly::var(int id, int exponent) {
  if (exponent < 0) throw std::invalid_argument("MPoly::var: negative exponent");
  if (exponent == 0) return MPoly(1);
  return term(Rational(1), Monomial{{id, exponent}});
}

MPoly MPoly::term(const Rational& c, Monomial m) {
  MPoly p;
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

void MPoly::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<int> MPoly::variables() const {
  std::set<int> vs;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m) vs.insert(v);
  }
  return vs;
}

bool MPoly::contains(int var) const {
  for (const auto& [m, c] : terms_) {
    if (monomial_exponent(m, var) > 0) return true;
  }
  return false;
}

int MPoly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_exponent(m, var));
  return d;
}

int MPoly::total_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (const auto& [v, e] : m) t += e;
    d = std::max(d, t);
  }
  return d;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MPoly& MPoly::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_mul(ma, mb), ca * cb);
  }
  return r;
}

MPoly MPoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("MPoly::pow: negative exponent");
  MPoly result(1), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

MPoly MPoly::partial(int var) const {
  MPoly r;
  for (const auto& [m, c] : terms_) {
    const int e = monomial_exponent(m, var);
    if (e == 0) continue;
    Monomial nm;
    for (const auto& [v, ex] : m) {
      if (v != var) {
        nm.emplace_back(v, ex);
      } else if (ex > 1) {
        nm.emplace_back(v, ex - 1);
      }
    }
    r.add_term(nm, c * Rational(e));
  }
  return r;
}

MPoly MPoly::substitute(int var, const MPoly& value) const {
  const auto parts = coefficients_in(var);
  MPoly r;
  MPoly power(1);
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) power *= value;
    if (!parts[k].is_zero()) r += parts[k] * power;
  }
  return r;
}

std::vector<MPoly> MPoly::coefficients_in(int var) const {
  std::vector<MPoly> out;
  for (const auto& [m, c] : terms_) {
    const int e = monomial_exponent(m, var);
    if (static_cast<int>(out.size()) <= e) out.resize(static_cast<size_t>(e) + 1);
    out[static_cast<size_t>(e)].add_term(monomial_without(m, var), c);
  }
  return out;
}

Rational MPoly::max_abs() const {
  Rational m(0);
  for (const auto& [mono, c] : terms_) m = std::max(m, c.abs());
  return m;
}

std::string MPoly::str(const std::function<std::string(int)>& name) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first reads more naturally.
  std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (const auto& p : a.first) da += p.second;
    for (const auto& p : b.first) db += p.second;
    return da > db;
  });
  for (const auto& [m, c] : sorted) {
    const Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (!mag.is_one() || m.empty()) {
      os << mag;
      wrote = true;
    }
    for (const auto& [v, e] : m) {
      if (wrote) os << "*";
      os << name(v);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace commop
