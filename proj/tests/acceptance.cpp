// Acceptance run: one PASS/FAIL line per criterion. Always exits 0 so that a
// failing criterion is reported rather than hidden behind a test failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commop/errors.hpp"
#include "commop/family.hpp"
#include "commop/qbuilder.hpp"
#include "commop/random_rationals.hpp"
#include "commop/soliton.hpp"
#include "commop/verifier.hpp"

using namespace commop;

namespace {

// Pinned tolerances and runtime limits (seconds).
constexpr double kLimitCurve1 = 1;
constexpr double kLimitLame = 5;
constexpr double kLimitCommute = 300;
constexpr double kLimitDixmier = 10;
constexpr double kLimitKdv = 30;
constexpr double kKdvErrorTol = 1e-5;
constexpr double kKdvRateMin = 8;
// An error this small is round-off, not time discretization.
constexpr double kRoundoffFloor = 1e-11;
constexpr double kMassTol = 1e-8;
constexpr double kResidualTol = 1e-4;
constexpr double kResidualTol0 = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void criterion(int id, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %2d: %s  [%.2f s]  %s\n", id, o.pass ? "PASS" : "FAIL", since(t0),
              o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

PolyZ P(std::vector<Rational> c) { return PolyZ(std::move(c)); }

// Curves as written out for the Lame operator, g2 = 0.
PolyZ lame_reference(int g, const Rational& g1, const Rational& g0) {
  switch (g) {
    case 1:
      return P({-g0 / 4, g1 / 4, 0, 1});
    case 2:
      return P({Rational(81, 4) * g0 * g1, Rational(27, 4) * g1 * g1, Rational(27, 4) * g0,
                Rational(21, 4) * g1, 0, 1});
    default:
      // The last printed term carries no power of z.
      return P({Rational(3375, 16) * (27 * g0 * g0 + g1.pow(3)), 0, Rational(18225, 8) * g0 * g1,
                Rational(4185, 16) * g1 * g1, Rational(297, 2) * g0, Rational(63, 2) * g1, 0, 1});
  }
}

std::string differing_degrees(const PolyZ& a, const PolyZ& b) {
  std::string out;
  const int top = std::max(a.degree(), b.degree());
  for (int k = 0; k <= top; ++k) {
    if (a.coeff(k) != b.coeff(k)) out += (out.empty() ? "z^" : ",z^") + std::to_string(k);
  }
  return out;
}

bool pair_identities(const Family& f) {
  const Op L = build_L(f);
  const QPolynomial Q = solve_Q(f);
  const SpectralCurve F = extract_curve(Q, f);
  const Op M = build_partner(Q, f.V(), L, f.kind());
  return commutator(L, M).is_zero() && (M * M - polynomial_in(F.F.coefficients(), L)).is_zero();
}

Family elliptic_tuple(RationalGen& gen, int g) {
  for (;;) {
    ParamMap p{{"alpha0", gen.nonzero()}, {"g2", gen.any()}, {"g1", gen.any()}, {"g0", gen.any()}};
    // W vanishes on 16 alpha0 + 5 g2 = 0 at g = 1 and the pair degenerates to L = H^2.
    if (g == 1 && 16 * p["alpha0"] + 5 * p["g2"] == 0) continue;
    return Family::make(FamilyTag::Elliptic, g, p);
  }
}

Outcome exact_curve_trig() {
  RationalGen gen(101);
  const auto t0 = Clock::now();
  int ok = 0;
  for (int t = 0; t < 5; ++t) {
    const Rational a0 = gen.any(), a1 = gen.nonzero();
    const Family f = Family::make(FamilyTag::Trig, 1, {{"alpha0", a0}, {"alpha1", a1}});
    const PolyZ expected = P({a1 * a1 / 4, Rational(1, 16) * (1 - 8 * a0 + 16 * a0 * a0 - 16 * a1 * a1),
                              Rational(1, 2) - 2 * a0, 1});
    ok += extract_curve(solve_Q(f), f).F == expected;
  }
  const double s = since(t0);
  return {ok == 5 && s < kLimitCurve1, std::to_string(ok) + "/5 exact, " + sci(s) + " s"};
}

Outcome lame_curves() {
  RationalGen gen(202);
  const auto t0 = Clock::now();
  std::string detail;
  bool all = true;
  for (int g = 1; g <= 3; ++g) {
    int ok = 0;
    std::string where;
    for (int t = 0; t < 5; ++t) {
      const Rational g1 = gen.nonzero(), g0 = gen.nonzero();
      const Family f = Family::make(FamilyTag::Lame, g, {{"g1", g1}, {"g0", g0}});
      const PolyZ F = extract_curve(solve_Q(f), f).F;
      const PolyZ ref = lame_reference(g, g1, g0);
      if (F == ref) {
        ++ok;
      } else {
        where = differing_degrees(F, ref);
      }
    }
    all = all && ok == 5;
    detail += "g=" + std::to_string(g) + " " + std::to_string(ok) + "/5" +
              (where.empty() ? "" : " (differs at " + where + ")") + "; ";
  }
  const double s = since(t0);
  return {all && s < kLimitLame, detail + sci(s) + " s"};
}

Outcome commutativity() {
  RationalGen gen(303);
  const auto t0 = Clock::now();
  int ok = 0, total = 0;
  for (int g = 1; g <= 3; ++g) {
    for (int t = 0; t < 3; ++t, ++total) {
      ok += pair_identities(Family::make(FamilyTag::Trig, g,
                                         {{"alpha0", gen.any()}, {"alpha1", gen.nonzero()},
                                          {"g2", gen.nonzero()}, {"g1", gen.any()}, {"g0", gen.any()}}));
    }
  }
  for (int g = 1; g <= 2; ++g) {
    for (int t = 0; t < 3; ++t, ++total) ok += pair_identities(elliptic_tuple(gen, g));
  }
  const double s = since(t0);
  return {ok == total && s < kLimitCommute,
          std::to_string(ok) + "/" + std::to_string(total) + " tuples with [L, M] = 0 and M^2 = F(L), " +
              sci(s) + " s"};
}

Outcome dixmier() {
  RationalGen gen(404);
  const auto t0 = Clock::now();
  int commute = 0, identity = 0;
  std::string values;
  for (int t = 0; t < 3; ++t) {
    const Rational h = gen.nonzero();
    const Family f = Family::make(FamilyTag::Dixmier, 1, {{"h", h}});
    const Op L = build_L(f);
    const Op H = build_H(f);
    const Op x = Op::multiply(FuncElem::generator(f.ring()));
    const Op Lt = H.pow(3) + (x * H + H * x) * Rational(3, 2);
    commute += commutator(L, Lt).is_zero();
    const Op diff = Lt * Lt - L.pow(3);
    const Op id = Op::identity(L.zero_elem());
    identity += (diff - id * h).is_zero();
    const bool scalar = diff.order() == 0 && diff.leading().is_x_free() && diff.leading().is_z_free();
    values += "h=" + h.str() + ": L~^2 - L^3 = " +
              (scalar ? diff.leading().as_constant().coeff(0).str() : std::string("non-scalar")) + "; ";
  }
  const double s = since(t0);
  return {commute == 3 && identity == 3 && s < kLimitDixmier,
          "commute " + std::to_string(commute) + "/3, L~^2 - L^3 = h " + std::to_string(identity) +
              "/3; " + values + sci(s) + " s"};
}

Outcome adjointness() {
  RationalGen gen(505);
  std::vector<Family> fams;
  for (int g = 1; g <= 3; ++g) {
    fams.push_back(Family::make(FamilyTag::Trig, g,
                                {{"alpha0", gen.any()}, {"alpha1", gen.nonzero()}, {"g2", gen.nonzero()},
                                 {"g1", gen.any()}, {"g0", gen.any()}}));
    fams.push_back(Family::make(FamilyTag::Cos, g, {{"alpha0", gen.any()}, {"alpha1", gen.nonzero()}}));
    fams.push_back(Family::make(FamilyTag::RapidDecay, g, {{"alpha0", gen.any()}, {"a", gen.nonzero().abs()}}));
    fams.push_back(Family::make(FamilyTag::Lame, g, {{"g1", gen.any()}, {"g0", gen.any()}}));
  }
  for (int g = 1; g <= 2; ++g) fams.push_back(elliptic_tuple(gen, g));
  fams.push_back(Family::make(FamilyTag::Dixmier, 1, {{"h", gen.any()}}));
  int ok = 0;
  for (const auto& f : fams) {
    const Op L = build_L(f);
    ok += adjoint(L) == L;
  }
  const VerificationReport skew = skew_check();
  const CheckEntry* e = skew.find("adjoint(L5) = -L5");
  const bool skew_ok = skew.ok() && e && e->status == CheckStatus::Pass;
  return {ok == static_cast<int>(fams.size()) && skew_ok,
          "adjoint(L) = L for " + std::to_string(ok) + "/" + std::to_string(fams.size()) +
              " operators; adjoint(L5) = -L5 " + (skew_ok ? "holds" : "fails")};
}

Outcome lax() {
  const VerificationReport r = lax_check();
  int pass = 0;
  std::string failed;
  for (const auto& c : r.checks) {
    if (c.status == CheckStatus::Pass) {
      ++pass;
    } else {
      failed += " " + c.check;
    }
  }
  const bool ok = r.ok() && pass == static_cast<int>(r.checks.size()) && r.find("V_t determined uniquely") &&
                  r.find("W_t determined uniquely");
  return {ok, std::to_string(pass) + "/" + std::to_string(r.checks.size()) + " hard checks" +
                  (failed.empty() ? "" : "; failing:" + failed)};
}

Outcome traveling_wave() {
  const TravelingWaveResult res = traveling_wave_solve();
  const TravelingWaveBranch* main = nullptr;
  for (const auto& b : res.branches) {
    if (b.solution.count("p") && b.solution.at("p") == "-10") main = &b;
  }
  if (!main) return {false, "no branch with p = -10"};
  auto matches = [&](const std::string& check) {
    const CheckEntry* e = res.report.find(check);
    return e && e->status == CheckStatus::Match;
  };
  const bool q_ok = main->solution.count("q") && main->solution.at("q") == "-40";
  const bool rel_ok = matches("v0 = -2b/21 - 5g2/6") && matches("r = -20/21 (8b + 7g2)");
  const CheckEntry* printed = res.report.find("printed solution satisfies the system identically");
  std::string detail = "p = -10, q = " + (q_ok ? std::string("-40") : "?") + ", v0 = " +
                       main->solution.at("v0") + ", r = " + main->solution.at("r");
  for (const auto& c : main->constraints) detail += "; constraint " + c;
  if (printed) detail += "; printed solution as stated: " + to_string(printed->status);
  return {res.report.ok() && q_ok && rel_ok && !main->constraints.empty() && printed, detail};
}

Outcome printed_cross_checks() {
  RationalGen gen(808);
  const std::vector<Family> fams{
      Family::make(FamilyTag::Cos, 2, {{"alpha0", 0}, {"alpha1", gen.nonzero()}}),
      Family::make(FamilyTag::Elliptic, 1, {{"alpha0", gen.nonzero()}, {"g1", gen.any()}, {"g0", gen.any()}}),
      Family::make(FamilyTag::Elliptic, 2, {{"alpha0", gen.nonzero()}, {"g0", gen.nonzero()}}),
  };
  bool ok = true;
  std::string detail;
  for (const auto& f : fams) {
    const VerificationReport r = pair_report(f);
    ok = ok && r.ok();
    const CheckEntry* curve = r.find("worked example curve");
    ok = ok && curve;
    int closed_forms = 0;
    detail += r.subject + ": curve " + (curve ? to_string(curve->status) : "missing");
    for (const auto& c : r.checks) {
      if (c.check.find("closed form") == std::string::npos) continue;
      ++closed_forms;
      detail += ", " + c.check + " " + to_string(c.status);
    }
    ok = ok && closed_forms >= 2;
    detail += "; ";
  }
  return {ok, detail + "hard identities " + (ok ? "hold" : "fail")};
}

Outcome lame_identity() {
  RationalGen gen(909);
  bool variant_exact = true, single_fails = true, curves_match = true;
  std::string curves;
  for (int g = 1; g <= 3; ++g) {
    const Rational g1 = gen.nonzero(), g0 = gen.nonzero();
    const Family f = Family::make(FamilyTag::Lame, g, {{"g1", g1}, {"g0", g0}});
    const QPolynomial Q = solve_Q(f);
    const FuncElem variant = curve_functional_schrodinger(f.potential(), Q.elem(), Rational(2));
    const FuncElem single = curve_functional_schrodinger(f.potential(), Q.elem(), Rational(1));
    variant_exact = variant_exact && variant.is_x_free();
    single_fails = single_fails && !single.is_x_free();
    if (!variant.is_x_free()) continue;
    const PolyZ F = variant.as_constant() * Rational(1, 4);
    const PolyZ ref = lame_reference(g, g1, g0);
    curves_match = curves_match && F == ref;
    curves += " g=" + std::to_string(g) + (F == ref ? " match" : " differs at " + differing_degrees(F, ref));
  }
  return {variant_exact && single_fails && curves_match,
          std::string("2QQ'' form x-free at g=1,2,3: ") + (variant_exact ? "yes" : "no") +
              "; single QQ'' form x-dependent: " + (single_fails ? "yes" : "no") + "; curve vs printed:" +
              curves};
}

double kdv_error(double dt) {
  Simulator sim(1024, 40);
  const auto x = sim.grid();
  const double kappa = 0.7, T = 2;
  auto wave = [&](double t) {
    std::vector<double> v(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      const double s = 1 / std::cosh(kappa * (x[i] + kappa * kappa * t));
      v[i] = 2 * kappa * kappa * s * s;
    }
    return v;
  };
  SimState s;
  s.V = wave(0);
  s.W.assign(x.size(), 0.0);
  const long n = std::lround(T / dt);
  for (long i = 0; i < n; ++i) s = sim.step(s, dt);
  const auto exact = wave(T);
  double m = 0;
  for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(s.V[i] - exact[i]));
  for (double w : s.W) m = std::max(m, std::abs(w));
  return m;
}

Outcome kdv() {
  const auto t0 = Clock::now();
  const double e1 = kdv_error(1e-3), e2 = kdv_error(5e-4);
  const double a = kdv_error(0.02), b = kdv_error(0.01), c = kdv_error(0.005);
  const double s = since(t0);
  const double literal = e1 / e2, r1 = a / b, r2 = b / c;
  // Halving at dt = 1e-3 only measures round-off once the error sits on the
  // floor; the rate is then taken from pairs where time error dominates.
  const bool rate_ok = literal >= kKdvRateMin || (e1 <= kRoundoffFloor && r1 >= kKdvRateMin && r2 >= kKdvRateMin);
  return {e1 <= kKdvErrorTol && rate_ok && s < kLimitKdv,
          "error " + sci(e1) + " at dt=1e-3, " + sci(e2) + " at dt=5e-4 (ratio " + sci(literal) +
              ", round-off floor); ratios " + sci(r1) + " (0.02->0.01), " + sci(r2) + " (0.01->0.005); " +
              sci(s) + " s"};
}

Outcome conservation(const RunResult& r) {
  const double m0 = r.diagnostics.front().mass_V;
  double worst = 0;
  for (const auto& d : r.diagnostics) worst = std::max(worst, std::abs(d.mass_V - m0));
  const double bound = kMassTol * (1 + std::abs(m0));
  return {!r.aborted && worst <= bound, "max |dM| = " + sci(worst) + " vs bound " + sci(bound) + " over " +
                                            std::to_string(r.diagnostics.size()) + " snapshots"};
}

int peaks_at(const SimConfig& c, const SimState& s, double fraction) {
  Simulator sim(c.N, c.L, c.dealias);
  return count_peaks(sim.grid(), s.V, c.alpha0.to_double(), 5, 2 * c.L, fraction);
}

Outcome pulses(const SimConfig& c2, const RunResult& r2) {
  SimConfig c3;
  c3.g = 3;
  c3.a = Rational(1, 4);
  c3.L = 80;
  c3.N = 2048;
  c3.T = 20;
  c3.snapshot_every = 20;
  const RunResult r3 = run(c3);
  if (r2.aborted || r3.aborted) return {false, "run aborted"};
  const int n2 = r2.diagnostics.back().peak_count, n3 = r3.diagnostics.back().peak_count;
  const int n2_low = peaks_at(c2, r2.final_state, 0.1), n3_low = peaks_at(c3, r3.final_state, 0.1);
  return {n2 == 2 && n3 == 3,
          "g=2 t=5: " + std::to_string(n2) + " pulse(s) above half max (" + std::to_string(n2_low) +
              " above 10%); g=3 t=20: " + std::to_string(n3) + " above half max (" + std::to_string(n3_low) +
              " above 10%)"};
}

Outcome residual_certificate() {
  SimConfig c;
  c.g = 1;
  c.track_Q = true;
  const RunResult r = run(c);
  if (r.aborted) return {false, "run aborted: " + r.message};
  const double at0 = *r.diagnostics.front().eq6_residual_max;
  double worst = 0;
  for (const auto& d : r.diagnostics) worst = std::max(worst, *d.eq6_residual_max);
  return {at0 <= kResidualTol0 && worst <= kResidualTol,
          "relative residual " + sci(at0) + " at t=0, max " + sci(worst) + " through t=" +
              std::to_string(static_cast<int>(r.diagnostics.back().t))};
}

}  // namespace

int main() {
  criterion(1, exact_curve_trig);
  criterion(2, lame_curves);
  criterion(3, commutativity);
  criterion(4, dixmier);
  criterion(5, adjointness);
  criterion(6, lax);
  criterion(7, traveling_wave);
  criterion(8, printed_cross_checks);
  criterion(9, lame_identity);
  criterion(10, kdv);

  SimConfig c2;
  c2.g = 2;
  const RunResult r2 = run(c2);
  criterion(11, [&] { return conservation(r2); });
  criterion(12, [&] { return pulses(c2, r2); });
  criterion(13, residual_certificate);
  return 0;
}
