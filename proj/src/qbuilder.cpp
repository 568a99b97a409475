#include "commop/qbuilder.hpp"

#include <map>
#include <sstream>
#include <tuple>

#include "commop/errors.hpp"
#include "commop/rat_matrix.hpp"

namespace commop {

namespace {

// (odd?, u power, z power) -> coefficient.
using FlatKey = std::tuple<int, int, int>;

void flatten_into(const FuncElem& e, std::map<FlatKey, Rational>& out) {
  const UPoly* parts[2] = {&e.even(), &e.odd()};
  for (int parity = 0; parity < 2; ++parity) {
    const UPoly& p = *parts[parity];
    for (size_t k = 0; k < p.size(); ++k) {
      const auto& c = p[k].coefficients();
      for (size_t j = 0; j < c.size(); ++j) {
        if (!c[j].is_zero()) out[{parity, static_cast<int>(k), static_cast<int>(j)}] = c[j];
      }
    }
  }
}

int degree_bound(DegreeBound b, int g, int s) {
  return b == DegreeBound::Linear ? g - s : g - (s + 1) / 2;
}

Rational falling(int s, int k) {  // (s+1)(s+2)...(s+k)
  Rational r(1);
  for (int i = 1; i <= k; ++i) r *= Rational(s + i);
  return r;
}

// Scales so that the z^g coefficient of Q is 1; that coefficient must be a
// constant sitting in A_0.
QPolynomial normalize(RingPtr ring, std::vector<PolyZ> A, int g) {
  for (size_t s = 1; s < A.size(); ++s) {
    if (A[s].degree() >= g) throw Error("Q: z^g coefficient depends on x");
  }
  const Rational lead = A.empty() ? Rational(0) : A[0].coeff(g);
  if (lead.is_zero()) throw Error("Q: vanishing z^g coefficient, cannot normalize");
  for (auto& a : A) a *= Rational(1) / lead;
  while (!A.empty() && A.back().is_zero()) A.pop_back();
  return QPolynomial{std::move(ring), std::move(A)};
}

PolyZ at(const std::vector<PolyZ>& A, int j) {
  return j >= 0 && j < static_cast<int>(A.size()) ? A[static_cast<size_t>(j)] : PolyZ();
}

}  // namespace

int QPolynomial::genus() const { return A.empty() ? 0 : A[0].degree(); }

FuncElem QPolynomial::elem() const { return FuncElem(ring, A); }

FuncElem QPolynomial::q(int j) const { return elem().coeff_z(j); }

FuncElem apply_L5(const FuncElem& V, const FuncElem& W, const FuncElem& Q) {
  const FuncElem f = FuncElem(V.ring(), PolyZ::z()) - W - V.derive(2);
  const FuncElem q1 = Q.derive();
  const FuncElem q3 = q1.derive(2);
  return q3.derive(2) + (V * q3 + (V * Q).derive(3)) * Rational(2) +
         (f * q1 + (f * Q).derive()) * Rational(2);
}

FuncElem apply_L3(const FuncElem& potential, const FuncElem& Q) {
  const FuncElem zu = FuncElem(potential.ring(), PolyZ::z()) - potential;
  const FuncElem q1 = Q.derive();
  return q1.derive(2) + zu * q1 * Rational(4) - potential.derive() * Q * Rational(2);
}

QPolynomial solve_Q(const FuncElem& V, const FuncElem& W, int g, OperatorKind kind,
                    DegreeBound bound) {
  const RingPtr& ring = V.ring();
  const FuncElem u = FuncElem::generator(ring);

  struct Column {
    int s, k;
  };
  std::vector<Column> cols;
  std::vector<std::map<FlatKey, Rational>> images;
  FuncElem us(ring, PolyZ(1));
  for (int s = 0; s <= g; ++s) {
    if (s > 0) us = us * u;
    const FuncElem img = kind == OperatorKind::Rank2 ? apply_L5(V, W, us) : apply_L3(W, us);
    PolyZ zk(1);
    for (int k = 0; k <= degree_bound(bound, g, s); ++k) {
      if (k > 0) zk = zk * PolyZ::z();
      std::map<FlatKey, Rational> flat;
      flatten_into(img * zk, flat);
      cols.push_back({s, k});
      images.push_back(std::move(flat));
    }
  }

  std::map<FlatKey, size_t> row_of;
  for (const auto& img : images) {
    for (const auto& [key, v] : img) row_of.emplace(key, 0);
  }
  size_t r = 0;
  for (auto& [key, idx] : row_of) idx = r++;
  RatMatrix m(row_of.size(), cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [key, v] : images[c]) m(row_of[key], c) = v;
  }

  const auto basis = row_of.empty() ? std::vector<std::vector<Rational>>{} : nullspace(m);
  auto to_A = [&](const std::vector<Rational>& v) {
    std::vector<PolyZ> A(static_cast<size_t>(g) + 1);
    for (size_t c = 0; c < cols.size(); ++c) {
      A[static_cast<size_t>(cols[c].s)] += PolyZ::monomial(v[c], cols[c].k);
    }
    return A;
  };
  if (row_of.empty()) throw NullityError("Q ansatz: operator annihilates every candidate", cols.size());
  if (basis.size() != 1) {
    std::ostringstream os;
    os << "Q ansatz has nullity " << basis.size() << " (expected 1)";
    for (size_t i = 0; i < basis.size(); ++i) {
      os << "\n  basis " << i << ": " << FuncElem(ring, to_A(basis[i])).str();
    }
    throw NullityError(os.str(), basis.size());
  }
  return normalize(ring, to_A(basis[0]), g);
}

QPolynomial solve_Q(const Family& f) {
  const DegreeBound b = f.cubic() ? DegreeBound::Weighted : DegreeBound::Linear;
  return solve_Q(f.V(), f.W(), f.genus(), f.kind(), b);
}

namespace {

QPolynomial recurrence_trig(const Family& f) {
  const int g = f.genus();
  const Rational a0 = f.param("alpha0"), a1 = f.param("alpha1");
  const Rational g2 = f.param("g2"), g1 = f.param("g1"), g0 = f.param("g0");
  std::vector<PolyZ> A(static_cast<size_t>(g) + 1);
  A[static_cast<size_t>(g)] = PolyZ(1);
  for (int s = g - 1; s >= 0; --s) {
    const Rational S(s);
    const Rational c0 = 8 * a1 * g2 * (2 * S + 1) * (S * (S + 1) - g * (g + 1));
    if (c0.is_zero()) throw ZeroDenominator("trig recurrence: zero denominator at s = " + std::to_string(s));
    const Rational s1 = S + 1;
    const PolyZ c1 = PolyZ(4 * s1 * (4 * s1 * s1 * (a0 * g2 + a1 * g1) + g2 * g2 * s1.pow(4))) +
                     PolyZ::monomial(16 * s1, 1);
    const Rational c2 = 2 * falling(s, 2) * (2 * S + 3) *
                        (4 * a0 * g1 + 4 * a1 * g0 + g1 * g2 * (2 * S * S + 6 * S + 5));
    const Rational c3 = falling(s, 3) * (16 * a0 * g0 + 8 * g0 * g2 * (S * S + 4 * S + 5) +
                                         g1 * g1 * (4 * S * S + 16 * S + 15));
    const Rational c4 = 4 * g0 * g1 * falling(s, 4) * (2 * S + 5);
    const Rational c5 = 4 * g0 * g0 * falling(s, 5);
    const PolyZ rest = c1 * at(A, s + 1) + at(A, s + 2) * c2 + at(A, s + 3) * c3 +
                       at(A, s + 4) * c4 + at(A, s + 5) * c5;
    A[static_cast<size_t>(s)] = rest * (Rational(-1) / c0);
  }
  return normalize(f.ring(), std::move(A), g);
}

// Coefficient k of the relation among A_s .. A_{s+6} obtained from the
// u^(s+1) u' term of L5 Q for cubic R.
PolyZ elliptic_coeff(const Family& f, int s, int k) {
  const Rational a0 = f.param("alpha0"), a1 = f.param("alpha1");
  const Rational g2 = f.param("g2"), g1 = f.param("g1"), g0 = f.param("g0");
  const Rational s1 = f.param("s1"), s2 = f.param("s2");
  const Rational S(s);
  switch (k) {
    case 0:
      return 16 * (S + 1) *
             (4 * a1 * S * S + 8 * a1 * S + 4 * S.pow(4) + 16 * S.pow(3) + 19 * S * S + 6 * S - s2);
    case 1:
      return 8 * (2 * S + 3) *
             (4 * a0 * (S + 1) * (S + 2) + g2 * (S + 1) * (S + 2) * (2 * S * S + 6 * S + a1 + 5) - s1);
    case 2: {
      const Rational t = S + 2;
      return PolyZ(4 * (4 * a0 * g2 * t.pow(3) + g2 * g2 * t.pow(5) +
                        2 * g1 * t.pow(3) * (4 * t * t + 2 * a1 + 5))) +
             PolyZ::monomial(16 * t, 1);
    }
    case 3:
      return 2 * (S + 2) * (S + 3) * (2 * S + 5) *
             (4 * g0 * (a1 + 2 * (S * S + 5 * S + 9)) + g1 * (4 * a0 + g2 * (2 * S * S + 10 * S + 13)));
    case 4:
      return (S + 2) * (S + 3) * (S + 4) *
             (16 * a0 * g0 + 8 * g0 * g2 * (S * S + 6 * S + 10) + g1 * g1 * (4 * S * S + 24 * S + 35));
    case 5:
      return 4 * g0 * g1 * (S + 2) * (S + 3) * (S + 4) * (S + 5) * (2 * S + 7);
    case 6:
      return 4 * g0 * g0 * falling(s + 1, 5);
    default:
      return PolyZ();
  }
}

QPolynomial recurrence_elliptic(const Family& f) {
  const int g = f.genus();
  // Each A_s is tracked as pa * A_g + pb * A_{g-1} with A_g, A_{g-1} unknown.
  struct Pair {
    PolyZ a, b;
  };
  std::vector<Pair> A(static_cast<size_t>(g) + 1);
  A[static_cast<size_t>(g)] = {PolyZ(1), PolyZ()};
  A[static_cast<size_t>(g - 1)] = {PolyZ(), PolyZ(1)};
  auto get = [&](int j) { return j >= 0 && j <= g ? A[static_cast<size_t>(j)] : Pair{}; };

  // The top two relations must vanish identically for the pinned alpha1, s1, s2.
  for (int s : {g, g - 1}) {
    Pair top{};
    for (int k = 0; k <= 6; ++k) {
      const PolyZ c = elliptic_coeff(f, s, k);
      top.a += c * get(s + k).a;
      top.b += c * get(s + k).b;
    }
    if (!top.a.is_zero() || !top.b.is_zero()) {
      throw Error("elliptic recurrence: top relation does not vanish at s = " + std::to_string(s));
    }
  }
  for (int s = g - 2; s >= -1; --s) {
    Pair rest{};
    for (int k = 1; k <= 6; ++k) {
      const PolyZ c = elliptic_coeff(f, s, k);
      rest.a += c * get(s + k).a;
      rest.b += c * get(s + k).b;
    }
    if (s == -1) {
      // Closing relation A_g P0 + A_{g-1} P1 = 0: take A_g = -P1, A_{g-1} = P0.
      const PolyZ top_g = -rest.b, top_g1 = rest.a;
      std::vector<PolyZ> out;
      PolyZ content;
      for (int j = 0; j <= g; ++j) {
        out.push_back(A[static_cast<size_t>(j)].a * top_g + A[static_cast<size_t>(j)].b * top_g1);
        content = PolyZ::gcd(content, out.back());
      }
      if (content.is_zero()) throw Error("elliptic recurrence: closing relation is trivial");
      for (auto& p : out) p = p.divmod(content).first;
      return normalize(f.ring(), std::move(out), g);
    }
    const PolyZ c0 = elliptic_coeff(f, s, 0);
    if (c0.is_zero()) {
      throw ZeroDenominator("elliptic recurrence: zero denominator at s = " + std::to_string(s));
    }
    const Rational inv = Rational(-1) / c0.coeff(0);
    A[static_cast<size_t>(s)] = {rest.a * inv, rest.b * inv};
  }
  throw Error("elliptic recurrence: unreachable");
}

QPolynomial recurrence_lame(const Family& f) {
  const int g = f.genus();
  const Rational g1 = f.param("g1"), g0 = f.param("g0");
  std::vector<PolyZ> A(static_cast<size_t>(g) + 1);
  A[static_cast<size_t>(g)] = PolyZ(1);
  for (int s = g - 1; s >= 0; --s) {
    const Rational S(s);
    const Rational den = 4 * (2 * S + 1) * (Rational(g * g + g) - S * (S + 1));
    if (den.is_zero()) throw ZeroDenominator("lame recurrence: zero denominator at s = " + std::to_string(s));
    const PolyZ num = (S + 1) * (PolyZ::monomial(8, 1) * at(A, s + 1) +
                                 at(A, s + 2) * (g1 * (S + 2) * (2 * S + 3)) +
                                 at(A, s + 3) * (2 * g0 * (S + 2) * (S + 3)));
    A[static_cast<size_t>(s)] = num * (Rational(1) / den);
  }
  return normalize(f.ring(), std::move(A), g);
}

}  // namespace

QPolynomial build_Q_recurrence(const Family& f) {
  switch (f.tag()) {
    case FamilyTag::Trig:
    case FamilyTag::Cos:
      return recurrence_trig(f);
    case FamilyTag::Elliptic:
    case FamilyTag::RapidDecay:
      return recurrence_elliptic(f);
    case FamilyTag::Lame:
      return recurrence_lame(f);
    case FamilyTag::Dixmier:
      break;
  }
  throw Error("no recurrence for family " + to_string(f.tag()));
}

FuncElem curve_functional_rank2(const FuncElem& V, const FuncElem& W, const FuncElem& Q) {
  const FuncElem z(V.ring(), PolyZ::z());
  const FuncElem q1 = Q.derive(), q2 = q1.derive(), q3 = q2.derive(), q4 = q3.derive();
  return (z - W) * Q * Q * Rational(4) - V * q1 * q1 * Rational(4) + q2 * q2 -
         q1 * q3 * Rational(2) +
         Q * (V.derive() * q1 * Rational(2) + V * q2 * Rational(4) + q4) * Rational(2);
}

FuncElem curve_functional_schrodinger(const FuncElem& potential, const FuncElem& Q,
                                      const Rational& c) {
  const FuncElem z(potential.ring(), PolyZ::z());
  const FuncElem q1 = Q.derive();
  return (z - potential) * Q * Q * Rational(4) - q1 * q1 + Q * q1.derive() * c;
}

SpectralCurve extract_curve(const QPolynomial& Q, const Family& f) {
  const FuncElem e = f.kind() == OperatorKind::Rank2
                         ? curve_functional_rank2(f.V(), f.W(), Q.elem())
                         : curve_functional_schrodinger(f.potential(), Q.elem());
  if (!e.is_x_free()) {
    throw CurveError("curve functional depends on x: residual " + e.str());
  }
  SpectralCurve c{e.as_constant() * Rational(1, 4), f.genus()};
  if (c.F.degree() != 2 * f.genus() + 1 || c.F.leading() != Rational(1)) {
    throw CurveError("curve is not monic of degree 2g+1: " + c.F.str());
  }
  return c;
}

CurveComparison compare_curves(const std::string& name, const PolyZ& reference,
                               const PolyZ& computed) {
  CurveComparison out{name, reference, computed, {}};
  const int top = std::max(reference.degree(), computed.degree());
  for (int k = 0; k <= top; ++k) {
    if (reference.coeff(k) != computed.coeff(k)) out.mismatched_degrees.push_back(k);
  }
  return out;
}

std::vector<CurveComparison> lemma_curves(const QPolynomial& Q, const Family& f,
                                          const SpectralCurve& F) {
  const auto A = [&](int j) { return at(Q.A, j); };
  const PolyZ z = PolyZ::z();
  const Rational quarter(1, 4);
  std::vector<CurveComparison> out;
  if (f.tag() == FamilyTag::Lame) {
    const Rational g1 = f.param("g1"), g0 = f.param("g0");
    const PolyZ w2 = (Rational(4) * A(0) * A(0) * z + A(0) * (A(2) * (4 * g0) + A(1) * g1) -
                      A(1) * A(1) * g0) * quarter;
    out.push_back(compare_curves("lame closed form", w2, F.F));
    return out;
  }
  if (f.tag() == FamilyTag::Dixmier) return out;

  const Rational a0 = f.param("alpha0"), a1 = f.param("alpha1");
  const Rational g2 = f.param("g2"), g1 = f.param("g1"), g0 = f.param("g0");
  const Rational gg(f.genus());

  // Closed form as written for the natural family.
  const PolyZ natural =
      (Rational(4) * A(0) * A(0) * z +
       A(0) * (A(2) * (16 * a0 * g0) + A(4) * (48 * g0 * g0) + A(3) * (36 * g0 * g1) +
               A(2) * (3 * g1 * g1) + A(2) * (16 * g0 * g2) +
               A(1) * ((25 - 8 * gg * (gg + 1)) * g0 + g1 * (4 * a0 + g2))) -
       A(1) * A(1) * (4 * a0 * g0) + (A(2) * (4 * g0) + A(1) * g1) * (A(2) * (4 * g0) + A(1) * g1) * quarter -
       A(1) * (2 * g0) * (A(3) * (6 * g0) + A(2) * (3 * g1) + A(1) * g2)) *
      quarter;

  // Closed form as written for the elliptic family; `g0_sq_term` multiplies 48 g0^2.
  const auto elliptic = [&](const PolyZ& g0_sq_term) {
    return (Rational(4) * A(0) * A(0) * z +
            A(0) * (A(1) * (4 * a1 * g0) + g0_sq_term * (48 * g0 * g0) + A(3) * (36 * g0 * g1) +
                    A(2) * (3 * g1 * g1) + (A(2) * (4 * g0) + A(1) * g1) * (4 * a0) +
                    A(2) * (16 * g0 * g2) + A(1) * (g1 * g2)) -
            A(1) * A(1) * (4 * a0 * g0) +
            (A(2) * (4 * g0) + A(1) * g1) * (A(2) * (4 * g0) + A(1) * g1) * quarter -
            A(1) * (2 * g0) * (A(3) * (6 * g0) + A(2) * (3 * g1) + A(1) * g2)) *
           quarter;
  };

  if (f.cubic()) {
    out.push_back(compare_curves("elliptic closed form as printed", elliptic(PolyZ(1)), F.F));
    out.push_back(compare_curves("elliptic closed form with 48 g0^2 A4", elliptic(A(4)), F.F));
    out.push_back(compare_curves("natural closed form applied to this family", natural, F.F));
  } else {
    out.push_back(compare_curves("natural closed form as printed", natural, F.F));
    out.push_back(compare_curves("elliptic closed form (48 g0^2 A4) applied to this family",
                                 elliptic(A(4)), F.F));
  }
  return out;
}

bool check_W_trace(const QPolynomial& Q, const FuncElem& W, const SpectralCurve& F) {
  const int g = F.genus;
  const FuncElem lhs = Q.q(g - 1) * Rational(2) - FuncElem(W.ring(), PolyZ(F.c2g()));
  return lhs == W;
}

}  // namespace commop
