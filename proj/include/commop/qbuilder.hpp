#pragma once

#include <string>
#include <vector>

#include "commop/family.hpp"
#include "commop/func_ring.hpp"
#include "commop/polyz.hpp"

namespace commop {

/// Q(x, z) = sum_s A_s(z) u^s, normalized so that the z^g coefficient is 1.
struct QPolynomial {
  RingPtr ring;
  std::vector<PolyZ> A;

  int genus() const;
  FuncElem elem() const;
  /// q_j(x), the coefficient of z^j.
  FuncElem q(int j) const;
  std::string str() const { return elem().str(); }
  friend bool operator==(const QPolynomial& a, const QPolynomial& b) {
    return *a.ring == *b.ring && a.A == b.A;
  }
};

/// w^2 = F(z), F monic of degree 2g + 1.
struct SpectralCurve {
  PolyZ F;
  int genus = 0;
  /// c_{2g}, the z^{2g} coefficient.
  Rational c2g() const { return F.coeff(2 * genus); }
};

/// L5 Q = Q^(5) + 2(V Q''' + (V Q)''') + 2(f Q' + (f Q)'), f = z - W - V''.
FuncElem apply_L5(const FuncElem& V, const FuncElem& W, const FuncElem& Q);
/// L3 Q = Q''' + 4(z - u) Q' - 2u' Q for the potential u.
FuncElem apply_L3(const FuncElem& potential, const FuncElem& Q);

/// Per-s upper bound on deg_z A_s for the ansatz.
enum class DegreeBound {
  /// deg_z A_s <= g - s.
  Linear,
  /// deg_z A_s <= g - ceil(s/2), for cubic R where u has twice the weight of z.
  Weighted,
};

/// Solves L Q = 0 for Q = sum_{s<=g} A_s(z) u^s, flattened per power of z into
/// one rational nullspace problem, then scales to monic in z. Throws
/// NullityError unless the solution space is one-dimensional with a nonzero
/// z^g coefficient.
QPolynomial solve_Q(const FuncElem& V, const FuncElem& W, int g, OperatorKind kind,
                    DegreeBound bound);
QPolynomial solve_Q(const Family& f);

/// Q from the closed recurrences for trig/cos, elliptic/rapid-decay and lame,
/// normalized to be monic. Throws ZeroDenominator on a resonant step and Error
/// for families without a recurrence.
QPolynomial build_Q_recurrence(const Family& f);

/// 4(z - W)Q^2 - 4V Q'^2 + Q''^2 - 2Q'Q''' + 2Q(2V'Q' + 4V Q'' + Q'''').
FuncElem curve_functional_rank2(const FuncElem& V, const FuncElem& W, const FuncElem& Q);
/// 4(z - u)Q^2 - Q'^2 + c Q Q'' with c = 2 (exact identity) or c = 1 (as printed).
FuncElem curve_functional_schrodinger(const FuncElem& potential, const FuncElem& Q,
                                      const Rational& c = Rational(2));

/// Evaluates the curve functional, requires it to be x-free, and returns F
/// (a quarter of it). Throws CurveError when x-dependence remains or F is not
/// monic of degree 2g + 1.
SpectralCurve extract_curve(const QPolynomial& Q, const Family& f);

/// Coefficient-wise comparison of a closed-form curve against the computed one.
struct CurveComparison {
  std::string name;
  PolyZ reference;  // the closed form or printed curve
  PolyZ computed;
  /// Degrees where the two disagree (empty when they match).
  std::vector<int> mismatched_degrees;
  bool match() const { return mismatched_degrees.empty(); }
};

CurveComparison compare_curves(const std::string& name, const PolyZ& reference,
                               const PolyZ& computed);

/// Evaluates the closed-form curve expressions in the A_j and compares each
/// with F. Rank-2 families get both closed forms written for the natural
/// (quadratic R) and the elliptic (cubic R) families, so a swapped or damaged
/// formula shows up as a mismatch; lame gets its A_0, A_1, A_2 formula.
/// Dixmier has none (empty result).
std::vector<CurveComparison> lemma_curves(const QPolynomial& Q, const Family& f,
                                          const SpectralCurve& F);

/// W == 2 [z^(g-1)]Q - c_{2g} as a ring identity.
bool check_W_trace(const QPolynomial& Q, const FuncElem& W, const SpectralCurve& F);

}  // namespace commop
