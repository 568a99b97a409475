#pragma once

#include <map>
#include <string>
#include <vector>

#include "commop/diffop.hpp"
#include "commop/func_ring.hpp"
#include "commop/rational.hpp"

namespace commop {

enum class FamilyTag { Trig, Cos, Elliptic, RapidDecay, Lame, Dixmier };

/// Fourth-order operators (d^2 + V)^2 + W versus the Schrodinger operator -d^2 + u.
enum class OperatorKind { Rank2, Schrodinger };

std::string to_string(FamilyTag tag);
/// Accepts "trig", "cos", "elliptic", "rapid-decay", "lame", "dixmier".
FamilyTag parse_family_tag(const std::string& name);

using ParamMap = std::map<std::string, Rational>;

/// An operator family at fixed genus with every parameter instantiated.
///
///   trig        R = g2 u^2 + g1 u + g0, V = alpha1 u + alpha0, W = alpha1 g2 g(g+1) u
///   cos         trig with g2 = -1, g1 = 0, g0 = 1 (u = cos x)
///   elliptic    R = 4u^3 + g2 u^2 + g1 u + g0, V = alpha1 u + alpha0, W = s1 u + s2 u^2,
///               alpha1, s1, s2 fixed by g, alpha0 and g2
///   rapid-decay elliptic with g2 = 4a^2, g1 = g0 = 0 (u = -a^2 sech^2(ax))
///   lame        L2 = -d^2 + g(g+1) u with R = 4u^3 + g1 u + g0
///   dixmier     (d^2 + x^3 + h)^2 + 2x in the polynomial ring in x, genus 1 only
class Family {
 public:
  /// Fills defaults and derived parameters, then validates. Throws
  /// FamilyConstraintError for unknown names, contradicting derived values or
  /// violated constraints.
  static Family make(FamilyTag tag, int genus, const ParamMap& given = {});

  /// Parameter names a caller may set for the tag.
  static std::vector<std::string> settable_params(FamilyTag tag);

  FamilyTag tag() const { return tag_; }
  int genus() const { return g_; }
  /// Effective parameters, including defaults and derived values.
  const ParamMap& params() const { return params_; }
  const Rational& param(const std::string& name) const;
  OperatorKind kind() const {
    return tag_ == FamilyTag::Lame ? OperatorKind::Schrodinger : OperatorKind::Rank2;
  }
  /// True for the families whose R is cubic (the u-grading counts u twice).
  bool cubic() const;

  const RingPtr& ring() const { return ring_; }
  /// Rank-2 coefficients; for lame V = 0 and W is the potential g(g+1)u.
  const FuncElem& V() const { return v_; }
  const FuncElem& W() const { return w_; }
  const FuncElem& potential() const { return w_; }

 private:
  Family(FamilyTag tag, int g, ParamMap p);
  FamilyTag tag_;
  int g_;
  ParamMap params_;
  RingPtr ring_;
  FuncElem v_, w_;
};

using Op = DiffOp<FuncElem>;

/// (d^2 + V)^2 + W for rank-2 families, -d^2 + potential for lame.
Op build_L(const Family& f);

/// d^2 + V.
Op build_H(const Family& f);

}  // namespace commop
