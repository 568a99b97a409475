#include "commop/func_ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "commop/errors.hpp"

namespace commop {

namespace {

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

void add_into(UPoly& acc, const UPoly& b, bool subtract = false) {
  if (b.size() > acc.size()) acc.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) {
    if (subtract) {
      acc[i] -= b[i];
    } else {
      acc[i] += b[i];
    }
  }
  trim(acc);
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
  }
  trim(r);
  return r;
}

UPoly derivative(const UPoly& a) {
  UPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Rational(static_cast<long>(i)));
  trim(r);
  return r;
}

UPoly scale(UPoly a, const Rational& s) {
  for (auto& c : a) c *= s;
  trim(a);
  return a;
}

UPoly relation_upoly(const RingSpec& ring) {
  UPoly r;
  for (const auto& c : ring.relation()) r.emplace_back(c);
  trim(r);
  return r;
}

}  // namespace

RingPtr RingSpec::quadratic(const Rational& r3, const Rational& r2, const Rational& r1,
                            const Rational& r0) {
  return RingPtr(new RingSpec(Flavor::QuadraticDifferential, {r0, r1, r2, r3}));
}

RingPtr RingSpec::polynomial_x() {
  return RingPtr(new RingSpec(Flavor::PolynomialX, {Rational(0), Rational(0), Rational(0), Rational(0)}));
}

PolyZ RingSpec::relation_poly() const {
  return PolyZ(std::vector<Rational>(r_.begin(), r_.end()));
}

FuncElem::FuncElem(RingPtr ring) : ring_(std::move(ring)) {}

FuncElem::FuncElem(RingPtr ring, const PolyZ& constant) : ring_(std::move(ring)) {
  if (!constant.is_zero()) even_.push_back(constant);
}

FuncElem::FuncElem(RingPtr ring, UPoly even, UPoly odd)
    : ring_(std::move(ring)), even_(std::move(even)), odd_(std::move(odd)) {
  trim(even_);
  trim(odd_);
  if (ring_->flavor() == Flavor::PolynomialX && !odd_.empty()) {
    throw Error("FuncElem: polynomial-x elements have no u' part");
  }
}

FuncElem FuncElem::generator(const RingPtr& ring) {
  return FuncElem(ring, UPoly{PolyZ(), PolyZ(1)});
}

FuncElem FuncElem::generator_prime(const RingPtr& ring) {
  if (ring->flavor() != Flavor::QuadraticDifferential) {
    throw Error("FuncElem::generator_prime: ring has no u'");
  }
  return FuncElem(ring, UPoly{}, UPoly{PolyZ(1)});
}

PolyZ FuncElem::even_coeff(int k) const {
  return k >= 0 && k < static_cast<int>(even_.size()) ? even_[static_cast<size_t>(k)] : PolyZ();
}

PolyZ FuncElem::odd_coeff(int k) const {
  return k >= 0 && k < static_cast<int>(odd_.size()) ? odd_[static_cast<size_t>(k)] : PolyZ();
}

bool FuncElem::same_ring(const FuncElem& o) const {
  return ring_ == o.ring_ || *ring_ == *o.ring_;
}

PolyZ FuncElem::as_constant() const {
  if (!is_x_free()) throw Error("FuncElem::as_constant: element depends on x");
  return even_.empty() ? PolyZ() : even_[0];
}

int FuncElem::z_degree() const {
  int d = -1;
  for (const auto& c : even_) d = std::max(d, c.degree());
  for (const auto& c : odd_) d = std::max(d, c.degree());
  return d;
}

int FuncElem::u_degree() const {
  return std::max(static_cast<int>(even_.size()), static_cast<int>(odd_.size())) - 1;
}

FuncElem FuncElem::coeff_z(int j) const {
  UPoly e, o;
  for (const auto& c : even_) e.emplace_back(c.coeff(j));
  for (const auto& c : odd_) o.emplace_back(c.coeff(j));
  return FuncElem(ring_, std::move(e), std::move(o));
}

FuncElem FuncElem::operator-() const {
  FuncElem r = *this;
  for (auto& c : r.even_) c = -c;
  for (auto& c : r.odd_) c = -c;
  return r;
}

FuncElem& FuncElem::operator+=(const FuncElem& o) {
  if (!same_ring(o)) throw RingMismatch();
  add_into(even_, o.even_);
  add_into(odd_, o.odd_);
  return *this;
}

FuncElem& FuncElem::operator-=(const FuncElem& o) {
  if (!same_ring(o)) throw RingMismatch();
  add_into(even_, o.even_, true);
  add_into(odd_, o.odd_, true);
  return *this;
}

FuncElem& FuncElem::operator*=(const Rational& s) {
  even_ = scale(std::move(even_), s);
  odd_ = scale(std::move(odd_), s);
  return *this;
}

FuncElem operator*(const FuncElem& a, const FuncElem& b) {
  if (!a.same_ring(b)) throw RingMismatch();
  if (a.is_zero() || b.is_zero()) return a.zero_like();
  UPoly even = mul(a.even_, b.even_);
  UPoly odd = mul(a.even_, b.odd_);
  add_into(odd, mul(a.odd_, b.even_));
  if (!a.odd_.empty() && !b.odd_.empty()) {
    add_into(even, mul(mul(a.odd_, b.odd_), relation_upoly(*a.ring_)));
  }
  return FuncElem(a.ring_, std::move(even), std::move(odd));
}

FuncElem operator*(const FuncElem& a, const PolyZ& p) {
  UPoly e = a.even_, o = a.odd_;
  for (auto& c : e) c *= p;
  for (auto& c : o) c *= p;
  return FuncElem(a.ring_, std::move(e), std::move(o));
}

bool operator==(const FuncElem& a, const FuncElem& b) {
  return a.same_ring(b) && a.even_ == b.even_ && a.odd_ == b.odd_;
}

FuncElem FuncElem::pow(int e) const {
  FuncElem r = constant_like(PolyZ(1));
  for (int i = 0; i < e; ++i) r *= *this;
  return r;
}

FuncElem FuncElem::derive() const {
  if (ring_->flavor() == Flavor::PolynomialX) return FuncElem(ring_, derivative(even_));
  const UPoly rel = relation_upoly(*ring_);
  // d(a(u)) = a'(u) u';  d(b(u) u') = b'(u) R(u) + b(u) R'(u)/2.
  UPoly odd = derivative(even_);
  UPoly even = mul(derivative(odd_), rel);
  add_into(even, scale(mul(odd_, derivative(rel)), Rational(1, 2)));
  return FuncElem(ring_, std::move(even), std::move(odd));
}

FuncElem FuncElem::derive(int n) const {
  FuncElem r = *this;
  for (int i = 0; i < n; ++i) r = r.derive();
  return r;
}

FuncElem FuncElem::at_z(const Rational& z) const {
  UPoly e, o;
  for (const auto& c : even_) e.emplace_back(c.eval(z));
  for (const auto& c : odd_) o.emplace_back(c.eval(z));
  return FuncElem(ring_, std::move(e), std::move(o));
}

Rational FuncElem::max_abs() const {
  Rational m(0);
  for (const auto& c : even_) m = std::max(m, c.max_abs());
  for (const auto& c : odd_) m = std::max(m, c.max_abs());
  return m;
}

double FuncElem::eval(double u, double uprime, double z) const {
  double e = 0.0, o = 0.0;
  for (auto it = even_.rbegin(); it != even_.rend(); ++it) e = e * u + it->eval(z);
  for (auto it = odd_.rbegin(); it != odd_.rend(); ++it) o = o * u + it->eval(z);
  return e + o * uprime;
}

std::string FuncElem::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  const std::string g = ring_->generator_name();
  bool first = true;
  auto emit = [&](const UPoly& p, bool odd) {
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
      const PolyZ& c = p[static_cast<size_t>(k)];
      if (c.is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      std::string mono;
      if (k > 0) mono = g + (k > 1 ? "^" + std::to_string(k) : "");
      if (odd) mono += (mono.empty() ? "" : "*") + g + "'";
      if (mono.empty()) {
        os << "(" << c.str() << ")";
      } else if (c == PolyZ(1)) {
        os << mono;
      } else {
        os << "(" << c.str() << ")*" << mono;
      }
    }
  };
  emit(even_, false);
  emit(odd_, true);
  return os.str();
}

std::vector<double> eval_grid(const FuncElem& e, const Rational& z, std::span<const double> u,
                              std::span<const double> uprime) {
  if (u.size() != uprime.size()) throw InvalidSamples("eval_grid: u and u' lengths differ");
  const auto& ring = *e.ring();
  const double zd = z.to_double();
  const PolyZ rel = ring.relation_poly();
  std::vector<double> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    if (ring.flavor() == Flavor::QuadraticDifferential) {
      const double r = rel.eval(u[i]);
      const double gap = uprime[i] * uprime[i] - r;
      if (!std::isfinite(gap) || std::abs(gap) > 1e-12 * std::max(1.0, std::abs(r))) {
        std::ostringstream msg;
        msg << "eval_grid: sample " << i << " violates (u')^2 = R(u) by " << gap;
        throw InvalidSamples(msg.str());
      }
    }
    out[i] = e.eval(u[i], uprime[i], zd);
  }
  return out;
}

}  // namespace commop
