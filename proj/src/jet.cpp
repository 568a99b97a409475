#include "commop/jet.hpp"

#include <algorithm>

#include "commop/errors.hpp"

namespace commop {

JetRingPtr JetRing::make(std::vector<std::string> functions, std::vector<std::string> constants) {
  auto r = std::shared_ptr<JetRing>(new JetRing());
  for (auto& f : functions) {
    r->names_.push_back(std::move(f));
    r->constant_.push_back(false);
  }
  for (auto& c : constants) {
    r->names_.push_back(std::move(c));
    r->constant_.push_back(true);
  }
  auto sorted = r->names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("JetRing: duplicate symbol name");
  }
  if (r->names_.empty()) throw Error("JetRing: no symbols");
  return r;
}

int JetRing::symbol(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  throw Error("JetRing: unknown symbol '" + name + "'");
}

int JetRing::var(int symbol, int order) const {
  if (symbol < 0 || symbol >= symbol_count()) throw Error("JetRing::var: bad symbol");
  if (order < 0) throw Error("JetRing::var: negative order");
  if (is_constant(symbol) && order > 0) throw Error("JetRing::var: constants have no derivatives");
  return order * symbol_count() + symbol;
}

std::string JetRing::var_name(int id) const {
  const int s = var_symbol(id), k = var_order(id);
  return k == 0 ? name(s) : name(s) + std::to_string(k);
}

JetElem JetElem::symbol(const JetRingPtr& ring, const std::string& name, int order) {
  return JetElem(ring, MPoly::var(ring->var(ring->symbol(name), order)));
}

JetElem& JetElem::operator+=(const JetElem& o) {
  if (!same_ring(o)) throw RingMismatch("jet");
  p_ += o.p_;
  return *this;
}

JetElem& JetElem::operator-=(const JetElem& o) {
  if (!same_ring(o)) throw RingMismatch("jet");
  p_ -= o.p_;
  return *this;
}

JetElem operator*(const JetElem& a, const JetElem& b) {
  if (!a.same_ring(b)) throw RingMismatch("jet");
  return JetElem(a.ring_, a.p_ * b.p_);
}

JetElem JetElem::derive() const {
  MPoly out;
  for (int id : p_.variables()) {
    const int s = ring_->var_symbol(id);
    if (ring_->is_constant(s)) continue;
    out += p_.partial(id) * MPoly::var(ring_->var(s, ring_->var_order(id) + 1));
  }
  return JetElem(ring_, std::move(out));
}

JetElem JetElem::derive(int n) const {
  JetElem r = *this;
  for (int i = 0; i < n; ++i) r = r.derive();
  return r;
}

JetElem JetElem::substitute(const std::string& name, const JetElem& value) const {
  if (!same_ring(value)) throw RingMismatch("jet");
  if (value.depends_on(name)) throw Error("JetElem::substitute: value depends on '" + name + "'");
  const int s = ring_->symbol(name);
  int max_order = -1;
  for (int id : p_.variables()) {
    if (ring_->var_symbol(id) == s) max_order = std::max(max_order, ring_->var_order(id));
  }
  MPoly out = p_;
  JetElem dv = value;
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) dv = dv.derive();
    const int id = ring_->var(s, k);
    if (out.contains(id)) out = out.substitute(id, dv.p_);
  }
  return JetElem(ring_, std::move(out));
}

bool JetElem::depends_on(const std::string& name) const {
  const int s = ring_->symbol(name);
  for (int id : p_.variables()) {
    if (ring_->var_symbol(id) == s) return true;
  }
  return false;
}

std::string JetElem::str() const {
  return p_.str([this](int id) { return ring_->var_name(id); });
}

}  // namespace commop
