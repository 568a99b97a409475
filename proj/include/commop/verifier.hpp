#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commop/family.hpp"
#include "commop/jet.hpp"
#include "commop/qbuilder.hpp"

namespace commop {

enum class CheckStatus {
  Pass,         // hard identity holds
  Fail,         // hard identity violated
  Match,        // agrees with a reference value
  Discrepancy,  // disagrees with a reference value; never fails a run
};

std::string to_string(CheckStatus s);

struct CheckEntry {
  std::string check;
  CheckStatus status;
  /// Largest |rational| left in the residual (zero when it vanishes).
  Rational residual_max;
  std::string details;
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckEntry> checks;
  std::map<std::string, int> orders;
  double seconds = 0;

  /// Records a hard identity: Pass iff the residual is zero.
  void hard(const std::string& check, const Rational& residual, std::string details = {});
  void hard(const std::string& check, bool ok, std::string details = {});
  /// Records a comparison against a reference value.
  void compare(const std::string& check, bool match, const Rational& residual,
               std::string details = {});
  void append(const VerificationReport& other);

  /// No hard identity failed.
  bool ok() const;
  const CheckEntry* find(const std::string& check) const;

  /// {subject, checks: [{check, status, residual_max, details}], orders[, timing_seconds]}.
  nlohmann::ordered_json to_json(bool with_timing = false) const;
};

using JOp = DiffOp<JetElem>;

/// Partner operator realizing multiplication by w:
///   rank2:       sum_j (q_j d^2 - q_j' d + q_j''/2 + V q_j) o L^j
///   schrodinger: sum_j (q_j d - q_j'/2) o L^j
Op build_partner(const QPolynomial& Q, const FuncElem& V, const Op& L, OperatorKind kind);

/// [L, M] = 0, the curve relation, adjoint(L) = L and the orders. The curve
/// relation is M^2 = F(L) for rank2 and M^2 = -F(L) for schrodinger (where
/// L = -d^2 + u makes the leading terms of M^2 and F(L) opposite in sign).
VerificationReport verify_pair(const Op& L, const Op& M, const SpectralCurve& F, OperatorKind kind);

/// Result of comparing a reference operator P against M.
struct OperatorComparison {
  /// "equal", "negated", "equal modulo polynomial in L", "negated modulo
  /// polynomial in L" or "different".
  std::string verdict;
  /// Constant coefficients c_k with P - (+-M) = sum c_k L^k when the verdict
  /// involves a polynomial.
  std::vector<Rational> polynomial;
  /// Residual after reduction when different.
  Rational residual;
  bool exact() const { return verdict == "equal" || verdict == "negated"; }
};
OperatorComparison compare_operator(const Op& P, const Op& M, const Op& L);

/// Partner operators written out for the worked examples, when the family
/// and parameters match one of them.
std::optional<Op> worked_example_partner(const Family& f);
/// Spectral curves written out for the worked examples.
std::optional<PolyZ> worked_example_curve(const Family& f);

/// Q, the curve and the curve comparisons without the partner operator. The
/// curve is absent when the pipeline failed.
struct CurveResult {
  std::optional<SpectralCurve> curve;
  VerificationReport report;
};
CurveResult curve_report(const Family& f);

/// {family, genus, params: {name: "p/q"}, F_coefficients: ["p/q", ... ascending]}.
nlohmann::ordered_json curve_json(const Family& f, const SpectralCurve& F);

/// Full pipeline for one family: Q (nullspace and recurrence), curve, partner,
/// hard identities and every reference comparison available for it.
VerificationReport pair_report(const Family& f);

/// The x^3 operator pair: [L_D, L~_D] = 0, L~_D^2 - L_D^3 a scalar equal to
/// F(0), a comparison with the printed value h, plus the generic pipeline on L_D.
VerificationReport dixmier_report(const Rational& h);

/// L4_t - [A3, L4] in the jet ring, substituted with the (V, W) flow.
VerificationReport lax_check();

/// adjoint(L5) = -L5 with V, W free and z a constant.
VerificationReport skew_check();

/// Traveling-wave ansatz V = p u + v0, W = q u^2 + r u + c, d/dt = b d/dx in
/// the cubic ring; solves the flow equations symbolically in (b, g2, g1, g0)
/// and, when values are given, evaluates any leftover parameter relation.
struct TravelingWaveBranch {
  std::map<std::string, std::string> solution;  // unknown -> expression
  std::vector<std::string> constraints;         // parameter relations, "= 0"
  std::vector<std::string> unresolved;          // equations the solver could not split
  bool trivial = false;                         // p = q = 0
};
struct TravelingWaveResult {
  std::vector<TravelingWaveBranch> branches;
  VerificationReport report;
};
TravelingWaveResult traveling_wave_solve(const std::map<std::string, Rational>& values = {});

/// Curve functional with 2QQ'' and with QQ'', and the factorization identity
/// 2QQ'' - Q'^2 - 4F = 4(u - z)Q^2, for the lame family.
VerificationReport lame_eigen_check(const Family& f);

}  // namespace commop
