#include "commop/family.hpp"

#include <algorithm>

#include "commop/errors.hpp"

namespace commop {

namespace {

struct TagName {
  FamilyTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {FamilyTag::Trig, "trig"},         {FamilyTag::Cos, "cos"},
    {FamilyTag::Elliptic, "elliptic"}, {FamilyTag::RapidDecay, "rapid-decay"},
    {FamilyTag::Lame, "lame"},         {FamilyTag::Dixmier, "dixmier"},
};

// Defaults for the parameters a caller may set.
ParamMap defaults(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Trig:
      return {{"alpha0", 0}, {"alpha1", 1}, {"g2", -1}, {"g1", 0}, {"g0", 1}};
    case FamilyTag::Cos:
      return {{"alpha0", 0}, {"alpha1", 1}};
    case FamilyTag::Elliptic:
      return {{"alpha0", 0}, {"g2", 0}, {"g1", 0}, {"g0", 0}};
    case FamilyTag::RapidDecay:
      return {{"alpha0", 0}, {"a", Rational(1, 2)}};
    case FamilyTag::Lame:
      return {{"g1", 0}, {"g0", 0}};
    case FamilyTag::Dixmier:
      return {{"h", 0}};
  }
  return {};
}

// Values fixed by the family (and genus); a caller may restate them but not change them.
ParamMap derived(FamilyTag tag, int g, const ParamMap& p) {
  const Rational gg(g);
  auto elliptic = [&](const Rational& g2) -> ParamMap {
    return {{"alpha1", Rational(1, 4) - 2 * gg * gg - 2 * gg},
            {"s1", Rational(1, 4) * gg * (gg + 1) * (16 * p.at("alpha0") + 5 * g2)},
            {"s2", -4 * gg * (gg + 2) * (gg * gg - 1)}};
  };
  switch (tag) {
    case FamilyTag::Cos:
      return {{"g2", -1}, {"g1", 0}, {"g0", 1}};
    case FamilyTag::Elliptic:
      return elliptic(p.at("g2"));
    case FamilyTag::RapidDecay: {
      const Rational& a = p.at("a");
      ParamMap d = elliptic(4 * a * a);
      d.emplace("g2", 4 * a * a);
      d.emplace("g1", 0);
      d.emplace("g0", 0);
      return d;
    }
    case FamilyTag::Lame:
      return {{"g2", 0}};
    default:
      return {};
  }
}

}  // namespace

std::string to_string(FamilyTag tag) {
  for (const auto& t : kTagNames) {
    if (t.tag == tag) return t.name;
  }
  return "?";
}

FamilyTag parse_family_tag(const std::string& name) {
  for (const auto& t : kTagNames) {
    if (name == t.name) return t.tag;
  }
  throw FamilyConstraintError("unknown family '" + name + "'");
}

std::vector<std::string> Family::settable_params(FamilyTag tag) {
  std::vector<std::string> out;
  for (const auto& [k, v] : defaults(tag)) out.push_back(k);
  return out;
}

Family Family::make(FamilyTag tag, int genus, const ParamMap& given) {
  const std::string fam = to_string(tag);
  if (genus < 1) throw FamilyConstraintError(fam + ": genus must be at least 1");
  if (tag == FamilyTag::Dixmier && genus != 1) {
    throw FamilyConstraintError("dixmier: only genus 1 is available");
  }
  ParamMap p = defaults(tag);
  ParamMap pinned;
  for (const auto& [k, v] : given) {
    if (p.count(k)) {
      p[k] = v;
    } else {
      pinned[k] = v;
    }
  }
  const ParamMap d = derived(tag, genus, p);
  for (const auto& [k, v] : pinned) {
    auto it = d.find(k);
    if (it == d.end()) throw FamilyConstraintError(fam + ": unknown parameter '" + k + "'");
    if (it->second != v) {
      throw FamilyConstraintError(fam + ": " + k + " is fixed to " + it->second.str() + ", got " +
                                  v.str());
    }
  }
  p.insert(d.begin(), d.end());

  switch (tag) {
    case FamilyTag::Trig:
    case FamilyTag::Cos:
      if (p["alpha1"].is_zero()) throw FamilyConstraintError(fam + ": alpha1 must be nonzero");
      if (p["g2"].is_zero()) throw FamilyConstraintError(fam + ": g2 must be nonzero");
      break;
    case FamilyTag::RapidDecay:
      if (p["a"].is_zero()) throw FamilyConstraintError(fam + ": a must be nonzero");
      break;
    default:
      break;
  }
  return Family(tag, genus, std::move(p));
}

Family::Family(FamilyTag tag, int g, ParamMap p)
    : tag_(tag),
      g_(g),
      params_(std::move(p)),
      ring_(tag == FamilyTag::Dixmier ? RingSpec::polynomial_x()
            : (tag == FamilyTag::Trig || tag == FamilyTag::Cos)
                ? RingSpec::quadratic(0, params_.at("g2"), params_.at("g1"), params_.at("g0"))
                : RingSpec::quadratic(4, params_.at("g2"), params_.at("g1"), params_.at("g0"))),
      v_(ring_),
      w_(ring_) {
  const FuncElem u = FuncElem::generator(ring_);
  const FuncElem one(ring_, PolyZ(1));
  const Rational gg(g);
  switch (tag) {
    case FamilyTag::Trig:
    case FamilyTag::Cos:
      v_ = u * param("alpha1") + one * param("alpha0");
      w_ = u * (param("alpha1") * param("g2") * gg * (gg + 1));
      break;
    case FamilyTag::Elliptic:
    case FamilyTag::RapidDecay:
      v_ = u * param("alpha1") + one * param("alpha0");
      w_ = u * param("s1") + u * u * param("s2");
      break;
    case FamilyTag::Lame:
      w_ = u * (gg * (gg + 1));
      break;
    case FamilyTag::Dixmier:
      v_ = u.pow(3) + one * param("h");
      w_ = u * Rational(2);
      break;
  }
}

const Rational& Family::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error(to_string(tag_) + ": no parameter '" + name + "'");
  return it->second;
}

bool Family::cubic() const { return tag_ == FamilyTag::Elliptic || tag_ == FamilyTag::RapidDecay; }

Op build_H(const Family& f) { return Op::derivation(f.V(), 2) + Op::multiply(f.V()); }

Op build_L(const Family& f) {
  if (f.kind() == OperatorKind::Schrodinger) {
    return Op::multiply(f.potential()) - Op::derivation(f.potential(), 2);
  }
  const Op h = build_H(f);
  return h * h + Op::multiply(f.W());
}

}  // namespace commop
