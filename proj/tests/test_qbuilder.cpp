#include <doctest.h>

#include "commop/errors.hpp"
#include "commop/family.hpp"
#include "commop/qbuilder.hpp"
#include "random_rationals.hpp"

using namespace commop;

namespace {

const PolyZ z = PolyZ::z();

PolyZ poly(std::vector<Rational> ascending) { return PolyZ(std::move(ascending)); }

// Curves written out from the worked examples, ascending in z.
PolyZ example1(const Rational& a0, const Rational& a1) {
  return poly({a1 * a1 / 4, Rational(1, 16) * (1 - 8 * a0 + 16 * a0 * a0 - 16 * a1 * a1),
               Rational(1, 2) - 2 * a0, 1});
}

PolyZ example2(const Rational& a1) {
  const Rational a2 = a1 * a1;
  return poly({24 * a2 + 513 * a2 * a2, 1 - 189 * a2 + 108 * a2 * a2,
               Rational(1, 4) * (34 - 531 * a2), Rational(1, 16) * (321 - 336 * a2),
               Rational(17, 2), 1});
}

PolyZ example3(const Rational& a0, const Rational& g1, const Rational& g0) {
  return poly({4 * a0 * a0 * g1 * g1 + Rational(27, 4) * a0 * g0 * g1 - 16 * a0.pow(3) * g0,
               9 * a0 * g0 + 4 * a0 * a0 * g1 + Rational(9, 16) * g1 * g1, Rational(3, 2) * g1, 1});
}

PolyZ example4(const Rational& a0, const Rational& g0) {
  return poly({-243 * a0 * g0 * g0 * (64 * a0.pow(3) + 637 * g0), 12636 * a0 * a0 * g0 * g0,
               27 * g0 * (16 * a0.pow(3) + 139 * g0), -387 * a0 * g0, 0, 1});
}

PolyZ lame_example(int g, const Rational& g1, const Rational& g0) {
  switch (g) {
    case 1:
      return poly({-g0 / 4, g1 / 4, 0, 1});
    case 2:
      return poly({Rational(81, 4) * g0 * g1, Rational(27, 4) * g1 * g1, Rational(27, 4) * g0,
                   Rational(21, 4) * g1, 0, 1});
    default:
      // The 3375/16 (27 g0^2 + g1^3) term sits at z^1: with weights z:2, g1:4,
      // g0:6 the curve is homogeneous of weight 14 and that term has weight 12.
      return poly({0, Rational(3375, 16) * (27 * g0 * g0 + g1.pow(3)), Rational(18225, 8) * g0 * g1,
                   Rational(4185, 16) * g1 * g1, Rational(297, 2) * g0, Rational(63, 2) * g1, 0,
                   1});
  }
}

Family random_family(testing::RationalGen& gen, FamilyTag tag, int g) {
  switch (tag) {
    case FamilyTag::Trig:
      return Family::make(tag, g, {{"alpha0", gen.any()}, {"alpha1", gen.nonzero()},
                                   {"g2", gen.nonzero()}, {"g1", gen.any()}, {"g0", gen.any()}});
    case FamilyTag::Cos:
      return Family::make(tag, g, {{"alpha0", gen.any()}, {"alpha1", gen.nonzero()}});
    case FamilyTag::Elliptic:
      return Family::make(tag, g, {{"alpha0", gen.any()}, {"g2", gen.any()}, {"g1", gen.any()},
                                   {"g0", gen.any()}});
    case FamilyTag::RapidDecay:
      return Family::make(tag, g, {{"alpha0", gen.any()}, {"a", gen.nonzero()}});
    case FamilyTag::Lame:
      return Family::make(tag, g, {{"g1", gen.any()}, {"g0", gen.any()}});
    case FamilyTag::Dixmier:
      return Family::make(tag, 1, {{"h", gen.any()}});
  }
  throw std::logic_error("tag");
}

}  // namespace

TEST_CASE("family constraints") {
  CHECK_THROWS_AS(Family::make(FamilyTag::Trig, 1, {{"alpha1", 0}}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Trig, 1, {{"g2", 0}}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Trig, 0, {}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Dixmier, 2, {}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Cos, 1, {{"g2", 3}}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Lame, 1, {{"alpha0", 1}}), FamilyConstraintError);
  CHECK_THROWS_AS(Family::make(FamilyTag::Elliptic, 2, {{"alpha1", 1}}), FamilyConstraintError);
  CHECK_NOTHROW(Family::make(FamilyTag::Elliptic, 1, {{"alpha1", Rational(-15, 4)}}));
  CHECK_THROWS_AS(parse_family_tag("bessel"), FamilyConstraintError);

  const Family e1 = Family::make(FamilyTag::Elliptic, 1, {});
  CHECK(e1.param("alpha1") == Rational(-15, 4));
  CHECK(e1.param("s2") == Rational(0));
  const Family r2 = Family::make(FamilyTag::RapidDecay, 2, {{"a", Rational(1, 2)}});
  CHECK(r2.param("alpha1") == Rational(-47, 4));
  CHECK(r2.param("s2") == Rational(-96));
  CHECK(r2.param("g2") == Rational(1));

  // cos family at g = 1: W = -2 alpha1 u.
  const Family c = Family::make(FamilyTag::Cos, 1, {{"alpha1", 1}});
  CHECK(c.W() == FuncElem::generator(c.ring()) * Rational(-2));
}

TEST_CASE("build_L expands (d^2 + V)^2 + W") {
  const Family f = Family::make(FamilyTag::Trig, 1, {{"alpha1", 3}, {"g2", 2}, {"g1", 1}});
  const Op L = build_L(f);
  CHECK(L.order() == 4);
  CHECK(L.coeff(4) == FuncElem(f.ring(), PolyZ(1)));
  CHECK(L.coeff(3).is_zero());
  CHECK(L.coeff(2) == f.V() * Rational(2));
  CHECK(L.coeff(1) == f.V().derive() * Rational(2));
  CHECK(L.coeff(0) == f.V().derive(2) + f.V() * f.V() + f.W());

  const Family lame = Family::make(FamilyTag::Lame, 2, {});
  const Op L2 = build_L(lame);
  CHECK(L2.order() == 2);
  CHECK(L2.coeff(2) == FuncElem(lame.ring(), PolyZ(-1)));
  CHECK(L2.coeff(0) == FuncElem::generator(lame.ring()) * Rational(6));
}

TEST_CASE("solve_Q trig g = 1 closed form and the cos g = 1 curve") {
  testing::RationalGen gen(101);
  for (int trial = 0; trial < 5; ++trial) {
    const Family f = random_family(gen, FamilyTag::Trig, 1);
    const Rational a0 = f.param("alpha0"), a1 = f.param("alpha1");
    const Rational g2 = f.param("g2"), g1 = f.param("g1");
    const QPolynomial Q = solve_Q(f);
    const FuncElem u = FuncElem::generator(f.ring());
    const FuncElem expected =
        u * (a1 * g2) + FuncElem(f.ring(), z + (g2 * g2 + 4 * a0 * g2 + 4 * a1 * g1) / 4);
    CHECK(Q.elem() == expected);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const Family f = random_family(gen, FamilyTag::Cos, 1);
    const SpectralCurve F = extract_curve(solve_Q(f), f);
    CHECK(F.F == example1(f.param("alpha0"), f.param("alpha1")));
  }
}

TEST_CASE("printed curves for the natural and elliptic families") {
  testing::RationalGen gen(202);
  for (int trial = 0; trial < 3; ++trial) {
    const Rational a1 = gen.nonzero();
    const Family c2 = Family::make(FamilyTag::Cos, 2, {{"alpha1", a1}});
    CHECK(extract_curve(solve_Q(c2), c2).F == example2(a1));

    const Rational a0 = gen.any(), g1 = gen.any(), g0 = gen.any();
    const Family e1 = Family::make(FamilyTag::Elliptic, 1, {{"alpha0", a0}, {"g1", g1}, {"g0", g0}});
    const QPolynomial Q1 = solve_Q(e1);
    const FuncElem u = FuncElem::generator(e1.ring());
    CHECK(Q1.elem() == u * (4 * a0) + FuncElem(e1.ring(), z + Rational(3, 4) * g1));
    CHECK(extract_curve(Q1, e1).F == example3(a0, g1, g0));

    const Family e2 = Family::make(FamilyTag::Elliptic, 2, {{"alpha0", a0}, {"g0", g0}});
    const QPolynomial Q2 = solve_Q(e2);
    const FuncElem v = FuncElem::generator(e2.ring());
    const FuncElem one(e2.ring(), PolyZ(1));
    const FuncElem expected2 = FuncElem(e2.ring(), z * z) + v * (z * (12 * a0) + PolyZ(-252 * g0)) +
                               v * v * (PolyZ(144 * a0 * a0) + z * Rational(-48)) +
                               one * (-63 * a0 * g0);
    CHECK(Q2.elem() == expected2);
    CHECK(extract_curve(Q2, e2).F == example4(a0, g0));
  }
}

TEST_CASE("Lame Q and curves") {
  const Family l1 = Family::make(FamilyTag::Lame, 1, {{"g1", 4}, {"g0", 8}});
  const QPolynomial Q = solve_Q(l1);
  CHECK(Q.elem() == FuncElem::generator(l1.ring()) + FuncElem(l1.ring(), z));
  CHECK(extract_curve(Q, l1).F == z * z * z + z - 2);

  testing::RationalGen gen(303);
  for (int trial = 0; trial < 5; ++trial) {
    const Rational g1 = gen.any(), g0 = gen.any();
    for (int g = 1; g <= 3; ++g) {
      const Family f = Family::make(FamilyTag::Lame, g, {{"g1", g1}, {"g0", g0}});
      const QPolynomial Qs = solve_Q(f);
      CHECK(Qs == build_Q_recurrence(f));
      const SpectralCurve F = extract_curve(Qs, f);
      CHECK(F.F == lame_example(g, g1, g0));
      // The single-QQ'' functional is not x-independent.
      CHECK_FALSE(curve_functional_schrodinger(f.potential(), Qs.elem(), Rational(1)).is_x_free());
    }
  }
}

TEST_CASE("Lame curves are weighted homogeneous") {
  // Scaling u -> t^2 u, x -> x / t, z -> t^2 z maps g1 -> t^4 g1, g0 -> t^6 g0
  // and F -> t^(4g+2) F.
  testing::RationalGen gen(313);
  const Rational t(3, 2);
  for (int g = 1; g <= 3; ++g) {
    const Rational g1 = gen.any(), g0 = gen.any();
    const Family a = Family::make(FamilyTag::Lame, g, {{"g1", g1}, {"g0", g0}});
    const Family b = Family::make(FamilyTag::Lame, g, {{"g1", g1 * t.pow(4)}, {"g0", g0 * t.pow(6)}});
    const PolyZ fa = extract_curve(solve_Q(a), a).F;
    const PolyZ fb = extract_curve(solve_Q(b), b).F;
    for (int k = 0; k <= 2 * g + 1; ++k) {
      CHECK(fb.coeff(k) == fa.coeff(k) * t.pow(4 * g + 2 - 2 * k));
    }
  }
}

TEST_CASE("Lame g = 2 recurrence output") {
  const Family f = Family::make(FamilyTag::Lame, 2, {{"g1", 5}});
  const FuncElem u = FuncElem::generator(f.ring());
  // z^2 + 3uz + 9u^2 + 9 g1 / 4.
  CHECK(build_Q_recurrence(f).elem() ==
        FuncElem(f.ring(), z * z + Rational(45, 4)) + u * z * Rational(3) + u * u * Rational(9));
}

TEST_CASE("every family: nullity one, annihilation, x-free monic curve, trace, recurrence") {
  testing::RationalGen gen(404);
  const FamilyTag tags[] = {FamilyTag::Trig, FamilyTag::Cos, FamilyTag::Elliptic,
                            FamilyTag::RapidDecay, FamilyTag::Lame};
  for (FamilyTag tag : tags) {
    for (int g = 1; g <= 3; ++g) {
      for (int trial = 0; trial < 3; ++trial) {
        const Family f = random_family(gen, tag, g);
        CAPTURE(to_string(tag));
        CAPTURE(g);
        const QPolynomial Q = solve_Q(f);
        const FuncElem image = f.kind() == OperatorKind::Rank2 ? apply_L5(f.V(), f.W(), Q.elem())
                                                               : apply_L3(f.potential(), Q.elem());
        CHECK(image.is_zero());
        CHECK(Q.q(g) == FuncElem(f.ring(), PolyZ(1)));
        const SpectralCurve F = extract_curve(Q, f);
        CHECK(F.F.degree() == 2 * g + 1);
        CHECK(F.F.leading() == Rational(1));
        CHECK(check_W_trace(Q, f.W(), F));
        CHECK(build_Q_recurrence(f) == Q);
      }
    }
  }
}

TEST_CASE("rapid-decay curves are elliptic curves at g2 = 4a^2, g1 = g0 = 0") {
  testing::RationalGen gen(505);
  for (int g = 1; g <= 3; ++g) {
    const Rational a = gen.nonzero(), a0 = gen.any();
    const Family r = Family::make(FamilyTag::RapidDecay, g, {{"alpha0", a0}, {"a", a}});
    const Family e = Family::make(FamilyTag::Elliptic, g, {{"alpha0", a0}, {"g2", 4 * a * a}});
    CHECK(extract_curve(solve_Q(r), r).F == extract_curve(solve_Q(e), e).F);
  }
}

TEST_CASE("dixmier Q and curve") {
  testing::RationalGen gen(606);
  for (int trial = 0; trial < 3; ++trial) {
    const Rational h = gen.any();
    const Family d = Family::make(FamilyTag::Dixmier, 1, {{"h", h}});
    const QPolynomial Q = solve_Q(d);
    CHECK(Q.elem() == FuncElem::generator(d.ring()) + FuncElem(d.ring(), z));
    const SpectralCurve F = extract_curve(Q, d);
    // By hand with Q = z + x: 4F = 4(z - 2x)(z + x)^2 - 4(x^3 + h) + 12x^2(z + x) = 4z^3 - 4h.
    CHECK(F.F == z * z * z - h);
    CHECK(check_W_trace(Q, d.W(), F));
  }
}

TEST_CASE("check_W_trace examples") {
  const Family c = Family::make(FamilyTag::Cos, 1, {{"alpha0", Rational(1, 3)}, {"alpha1", 2}});
  const QPolynomial Q = solve_Q(c);
  const SpectralCurve F = extract_curve(Q, c);
  CHECK(F.c2g() == Rational(1, 2) - 2 * Rational(1, 3));
  CHECK(check_W_trace(Q, c.W(), F));
  CHECK_FALSE(check_W_trace(Q, c.W() * Rational(2), F));

  // Zero potential: Q = z^g + kappa z^(g-1) forces c_2g = 2 kappa.
  const auto ring = RingSpec::quadratic(0, 1, 0, 0);
  const QPolynomial flat{ring, {PolyZ::monomial(1, 2) + PolyZ::monomial(3, 1)}};
  CHECK(check_W_trace(flat, FuncElem(ring), SpectralCurve{poly({0, 0, 0, 0, 6, 1}), 2}));
}

TEST_CASE("closed-form curve reports") {
  testing::RationalGen gen(707);
  const Family l1 = Family::make(FamilyTag::Lame, 1, {{"g1", gen.any()}, {"g0", gen.any()}});
  const QPolynomial Ql = solve_Q(l1);
  const auto lame = lemma_curves(Ql, l1, extract_curve(Ql, l1));
  REQUIRE(lame.size() == 1);
  CHECK(lame[0].match());

  // With g0 != 0 the closed form written for the natural family fits the
  // elliptic curves, and the one written for the elliptic family fits the
  // natural curves.
  for (int g = 1; g <= 3; ++g) {
    const Family t = random_family(gen, FamilyTag::Trig, g);
    const QPolynomial Qt = solve_Q(t);
    const auto rt = lemma_curves(Qt, t, extract_curve(Qt, t));
    REQUIRE(rt.size() == 2);
    CHECK(rt[1].match());

    const Family e = Family::make(FamilyTag::Elliptic, g,
                                  {{"alpha0", gen.any()}, {"g2", gen.any()}, {"g1", gen.any()},
                                   {"g0", gen.nonzero()}});
    const QPolynomial Qe = solve_Q(e);
    const auto re = lemma_curves(Qe, e, extract_curve(Qe, e));
    REQUIRE(re.size() == 3);
    CHECK_FALSE(re[0].match());
    CHECK_FALSE(re[1].match());
    CHECK(re[2].match());
  }
}

TEST_CASE("solve_Q reports nullity failures") {
  // W = 0 leaves no nonzero Q of the genus-2 shape for this V.
  const Family f = Family::make(FamilyTag::Trig, 2, {{"alpha1", 1}, {"g2", 1}});
  CHECK_THROWS_AS(solve_Q(f.V(), FuncElem(f.ring()), 2, OperatorKind::Rank2, DegreeBound::Linear),
                  NullityError);
}
