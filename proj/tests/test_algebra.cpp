#include <gtest/gtest.h>

#include "rdsym/algebra/realizations.hpp"
#include "rdsym/catalog/closure.hpp"

using namespace rdsym;

namespace {

bool same(const Generator& a, const Generator& b) {
  const Generator d = (a - b).simplified();
  if (!is_zero(d.eta).zero() || !is_zero(d.pi[0]).zero() || !is_zero(d.pi[1]).zero()) return false;
  for (const auto& x : d.xi) {
    if (!is_zero(x).zero()) return false;
  }
  return true;
}

Rational rnd(std::mt19937_64& rng, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 5);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

ConjugatorU random_u(std::mt19937_64& rng) {
  ConjugatorU U{rnd(rng), rnd(rng), rnd(rng), rnd(rng)};
  while (U.K1 == 0 && U.K2 == 0) U.K1 = rnd(rng);
  return U;
}

TailMatrix random_tail(std::mt19937_64& rng) { return TailMatrix::from(rnd(rng), rnd(rng), rnd(rng), rnd(rng)); }

std::set<std::string> names(const Enumeration& e) {
  std::set<std::string> out;
  for (const auto& c : e.classes) out.insert(c.cls.name);
  return out;
}

}  // namespace

TEST(Commutator, TimeTranslationAndDilatation) {
  EXPECT_TRUE(same(commutator(P0(2), Dil(2)), P0(2)));
  EXPECT_TRUE(same(commutator(P(2, 1), Dil(2)), P(2, 1).scaled(rational(1, 2))));
  EXPECT_TRUE(commutator(Dil(3), Dil(3)).is_zero());
}

TEST(Commutator, AntisymmetryAndJacobi) {
  const DiffusionMatrix A(Expr(rational(2, 3)));
  const std::vector<Generator> gs{P0(2), Gal(2, 1, A), Dil(2), Conf(2, A), Ainv_field(2, A), Jrot(2, 1, 2)};
  for (const auto& x : gs) {
    for (const auto& y : gs) {
      EXPECT_TRUE(same(commutator(x, y), commutator(y, x).scaled(Expr(-1))));
    }
  }
  const auto& x = gs[1];
  const auto& y = gs[2];
  const auto& z = gs[3];
  const Generator j = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
  EXPECT_TRUE(same(j, Generator(2)));
}

TEST(Commutator, GalileiAlgebraOfTheClass) {
  const DiffusionMatrix A(Expr(rational(-3, 2)));
  // G_1 has U-part -(x/2) A^{-1} U d_U, so [d_x, G_1] = -(1/2) A^{-1} U d_U
  const Generator b = commutator(P(1, 1), Gal(1, 1, A));
  EXPECT_TRUE(same(b, Ainv_field(1, A).scaled(rational(-1, 2))));
  EXPECT_TRUE(same(commutator(P0(1), Gal(1, 1, A)), P(1, 1)));
}

TEST(Tails, MatrixAndOperatorBrackets) {
  EXPECT_EQ(bracket(g1(), g2()), g2());
  EXPECT_TRUE(bracket(g1(), g3(Rational(5))).is_zero());
  EXPECT_TRUE(bracket(g2(), g4()).is_zero());
  // tails act as vector fields with the opposite bracket
  EXPECT_TRUE(same(commutator(tail_field(g1(), 1), tail_field(g2(), 1)), tail_field(g2(), 1).scaled(Expr(-1))));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    const auto a = random_tail(rng), b = random_tail(rng);
    EXPECT_TRUE(same(commutator(tail_field(a, 2), tail_field(b, 2)), tail_field(bracket(b, a), 2)));
  }
}

TEST(Tails, RejectsInvalidMatrices) {
  Mat3 m = mat3_zero();
  m[0][1] = 1;
  EXPECT_THROW(TailMatrix{m}, SymbolicError);
  m = mat3_zero();
  m[1][1] = 1;
  EXPECT_THROW(TailMatrix{m}, SymbolicError);
  EXPECT_THROW((ConjugatorU{1, 1, 0, 0}.inverse()), SymbolicError);
}

TEST(Canonicalize, Examples) {
  const auto z = canonicalize_tail(TailMatrix());
  EXPECT_EQ(z.form, TailForm::Zero);
  EXPECT_EQ(z.U.matrix(), mat3_identity());

  const auto c3 = canonicalize_tail(g3(Rational(2)));
  EXPECT_EQ(c3.form, TailForm::G3);
  EXPECT_EQ(c3.alpha, 2);
  EXPECT_EQ(c3.scale, 1);
  EXPECT_EQ(c3.U.matrix(), mat3_identity());

  // C = I, B = (1, 0): U g U^{-1} has translation K B - C b, so b = B
  const auto c1 = canonicalize_tail(TailMatrix::from(1, 0, 1, 0));
  EXPECT_EQ(c1.form, TailForm::G1);
  EXPECT_EQ(c1.U.b1, 1);
  EXPECT_EQ(c1.U.b2, 0);
  EXPECT_EQ(c1.U.conjugate(TailMatrix::from(1, 0, 1, 0)), g1());

  const auto c2 = canonicalize_tail(TailMatrix::from(0, 3, 0, 0));
  EXPECT_EQ(c2.form, TailForm::G2);
  EXPECT_EQ(c2.U.conjugate(TailMatrix::from(0, 3, 0, 0)), g2());
}

TEST(Canonicalize, RandomConjugatesReturnToTheirForm) {
  std::mt19937_64 rng(500);
  for (int k = 0; k < 500; ++k) {
    const int which = k % 3;
    const Rational alpha = rnd(rng);
    const TailMatrix form = which == 0 ? g1() : which == 1 ? g2() : g3(alpha);
    Rational s = rnd(rng);
    if (s == 0) s = 1;
    if (which == 1) s = 1;  // translations are normalized by K
    const ConjugatorU V = random_u(rng);
    const TailMatrix g = TailMatrix(V.inverse() * (s * form).g * V.matrix());
    const CanonicalTail c = canonicalize_tail(g);
    ASSERT_EQ(c.matrix(), form) << render(g.g);
    EXPECT_EQ(c.U.conjugate(g), c.scale * form);
    if (which == 2) EXPECT_EQ(c.alpha, alpha);
  }
}

TEST(Canonicalize, ClassFunctionAndBracketCompatibility) {
  std::mt19937_64 rng(200);
  for (int k = 0; k < 200; ++k) {
    const TailMatrix g = random_tail(rng), h = random_tail(rng);
    const ConjugatorU U = random_u(rng);
    EXPECT_EQ(U.conjugate(bracket(g, h)), bracket(U.conjugate(g), U.conjugate(h)));
    const auto a = canonicalize_tail(g), b = canonicalize_tail(U.conjugate(g));
    EXPECT_EQ(a.form, b.form);
    EXPECT_EQ(a.alpha, b.alpha);
  }
}

TEST(Enumerate, TwoDimensional) {
  const Enumeration e = enumerate_algebras(2);
  EXPECT_EQ(names(e), (std::set<std::string>{"A_{2,1}", "A_{2,2}", "A_{2,3}"}));
  for (const auto& c : e.classes) {
    const auto sc = structure_constants(c.cls.basis);
    ASSERT_TRUE(sc);
    const bool abelian = bracket(c.cls.basis[0], c.cls.basis[1]).is_zero();
    if (c.cls.name == "A_{2,3}") {
      EXPECT_EQ(bracket(c.cls.basis[0], c.cls.basis[1]), c.cls.basis[1]);
    } else {
      EXPECT_TRUE(abelian) << c.cls.name;
    }
  }
}

TEST(Enumerate, ThreeAndFourDimensional) {
  const Enumeration e3 = enumerate_algebras(3);
  EXPECT_EQ(names(e3), (std::set<std::string>{"A_{3,1}", "A_{3,2}"}));
  for (const auto& c : e3.classes) {
    if (c.cls.name == "A_{3,1}") EXPECT_EQ(c.cls.basis, (std::vector<TailMatrix>{g1(), g2(), g4()}));
    if (c.cls.name == "A_{3,2}") EXPECT_GT(c.alphas.size(), 1u);
  }
  const Enumeration e4 = enumerate_algebras(4);
  ASSERT_EQ(e4.classes.size(), 1u);
  EXPECT_EQ(e4.classes[0].cls.name, "A_{4,1}");
}

TEST(Enumerate, ListedBasesAreAlgebras) {
  EXPECT_TRUE(structure_constants({g1(), g2(), g4()}));
  EXPECT_TRUE(structure_constants({g2(), g3(Rational(2, 3)), g4()}));
  EXPECT_TRUE(structure_constants({g1(), g3(Rational(2, 3)), g4(), g2()}));
  const TailMatrix tilde = ConjugatorU{1, -2, 2, 1}.conjugate(g4());
  EXPECT_TRUE(structure_constants({g1(), g3(Rational(2, 3)), tilde, g2()}));
  // g3 and a translation do not close in two dimensions
  EXPECT_FALSE(structure_constants({g3(Rational(1)), g2()}));
}

TEST(Enumerate, BudgetIsReported) {
  EnumerationOptions o;
  o.budget = 10;
  EXPECT_THROW(enumerate_algebras(3, o), SearchBudgetExceeded);
  EXPECT_THROW(enumerate_algebras(5), SymbolicError);
}

TEST(Closure, TranslationsAndDilatation) {
  ClosureOptions o;
  o.adjoin_basic = false;
  const auto r = closure_check({P0(1), P(1, 1), Dil(1)}, o);
  ASSERT_TRUE(r.closed);
  EXPECT_EQ(r.constants[0][2], (std::vector<Rational>{1, 0, 0}));
  EXPECT_EQ(r.constants[1][2], (std::vector<Rational>{0, Rational(1, 2), 0}));
}

TEST(Closure, GalileiNeedsTheInverseMatrixField) {
  const DiffusionMatrix A(Expr(rational(1, 3)));
  EXPECT_FALSE(closure_check({Gal(1, 1, A)}).closed);
  EXPECT_TRUE(closure_check({Gal(1, 1, A), Ainv_field(1, A)}).closed);
}

TEST(Closure, WitnessForNonClosingSet) {
  Generator X(1);
  X.pi = {-(t_() * t_()), Expr(0)};
  X.label = "t^2 du";
  const auto r = closure_check({X});
  EXPECT_FALSE(r.closed);
  ASSERT_TRUE(r.witness);
}

TEST(Closure, FamilyBracketsNeedTheSystem) {
  const Catalog cat = load_catalog();
  const auto& e = cat.entry("T2.2");
  ParamPoint p{{"a", Rational(1, 2)}, {"beta", Rational(2)}, {"kappa", Rational(-1)}};
  const Instance in = instantiate(cat, e, p, 2);
  const auto gens = in.main();
  EXPECT_FALSE(closure_check(gens).closed);
  ClosureOptions o;
  o.system = &in.sys;
  const auto r = closure_check(gens, o);
  EXPECT_TRUE(r.closed);
  EXPECT_FALSE(r.family_brackets.empty());
}

TEST(Closure, BracketsOfCatalogSymmetriesAreSymmetries) {
  const Catalog cat = load_catalog();
  std::mt19937_64 rng(3);
  for (const auto& e : cat.entries) {
    const auto p = draw_point(e, 2, {}, rng);
    ASSERT_TRUE(p) << e.id;
    const Instance in = instantiate(cat, e, *p, 2);
    auto gens = in.main();
    for (const auto& b : basic_symmetries(2)) gens.push_back(b);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        EXPECT_TRUE(is_symmetry(in.sys, commutator(gens[i], gens[j])))
            << e.id << " " << gens[i].label << ", " << gens[j].label;
      }
    }
  }
}

TEST(FundamentalPair, Examples) {
  auto p = fundamental_pair(0, 0, 0, 0);
  EXPECT_TRUE(proven_zero(p.F1 - Expr(1)) && proven_zero(p.G1) && proven_zero(p.F2) && proven_zero(p.G2 - Expr(1)));
  p = fundamental_pair(1, 0, 0, 0);
  EXPECT_TRUE(is_zero(p.F1 - exp(t_())).zero());
  EXPECT_TRUE(is_zero(p.G2 - Expr(1)).zero());
  p = fundamental_pair(Rational(3, 2), 1, -1, Rational(3, 2));
  EXPECT_EQ(p.branch, "complex");
  EXPECT_TRUE(is_zero(p.F1 - exp(rational(3, 2) * t_()) * cos(t_())).zero());
  EXPECT_TRUE(is_zero(p.F2 - exp(rational(3, 2) * t_()) * sin(t_())).zero());
}

TEST(FundamentalPair, SolvesTheSystemOnAllBranches) {
  const std::vector<std::array<Rational, 4>> cases{
      {1, 2, 3, Rational(1, 2)}, {1, 2, -1, Rational(1, 2)}, {2, 1, 0, 2}, {0, 1, -4, 0}, {Rational(-1, 3), 0, 5, 1}};
  for (const auto& c : cases) {
    const auto p = fundamental_pair(c[0], c[1], c[2], c[3]);
    const Expr l(c[0]), n(c[1]), s(c[2]), g(c[3]);
    for (const auto& [F, G] : {std::pair{p.F1, p.G1}, std::pair{p.F2, p.G2}}) {
      EXPECT_TRUE(is_zero(diff(F, Symbol::time()) - l * F - n * G).zero()) << p.branch;
      EXPECT_TRUE(is_zero(diff(G, Symbol::time()) - s * F - g * G).zero()) << p.branch;
    }
    const Substitution at0 = Substitution().bind(Symbol::time(), Expr(0));
    EXPECT_TRUE(is_zero(subst(p.F1, at0) - Expr(1)).zero());
    EXPECT_TRUE(is_zero(subst(p.G1, at0)).zero());
    EXPECT_TRUE(is_zero(subst(p.F2, at0)).zero());
    EXPECT_TRUE(is_zero(subst(p.G2, at0) - Expr(1)).zero());
  }
}

TEST(Realizations, CloseInOneDimension) {
  for (const auto& r : realizations(1)) {
    const bool closed = closure_check(r.basis).closed;
    if (r.name == "A_{3,2} #1") {
      // [e2, e3] contains e1, which enters only through muD - 2e1
      EXPECT_FALSE(closed);
    } else {
      EXPECT_TRUE(closed) << r.name << " " << r.algebra;
    }
  }
  RealizationParams rp;
  rp.mu = 0;
  for (const auto& r : realizations(1, rp)) {
    if (r.name == "A_{3,2} #1") EXPECT_TRUE(closure_check(r.basis).closed);
  }
  rp = RealizationParams{};
  rp.tilde_g4 = true;
  for (const auto& r : realizations(1, rp)) {
    if (r.algebra == "A_{4,1}") EXPECT_TRUE(closure_check(r.basis).closed) << r.name;
  }
}

TEST(Realizations, RotationsInHigherDimension) {
  RealizationParams rp;
  for (const auto& r : realizations(2, rp)) {
    if (r.name == "A_{4,1} #2") EXPECT_FALSE(closure_check(r.basis).closed);
  }
  rp.nu = 0;
  rp.mu = 0;
  for (const auto& r : realizations(2, rp)) {
    if (r.name == "A_{4,1} #2") EXPECT_TRUE(closure_check(r.basis).closed);
  }
}

TEST(Realizations, PairsOfMultiplesAreIncompatible) {
  const auto fp = fundamental_pair(1, 2, -1, Rational(1, 2));
  ParseContext ctx;
  const RDSystem s1(1, DiffusionMatrix(Expr(rational(1, 2))), {parse("u^3*v", ctx), parse("exp(u)", ctx)});
  const RDSystem s2(1, DiffusionMatrix(Expr(rational(1, 2))), {parse("F1(u)", ctx), parse("v^2", ctx)});
  for (const auto& e : {g1(), g2(), g3(Rational(1, 3))}) {
    const Vec2 o1 = pair_obstruction(s1, e, fp.F1, fp.G1);
    const Vec2 o2 = pair_obstruction(s2, e, fp.F1, fp.G1);
    EXPECT_FALSE(is_zero(o1[0]).zero() && is_zero(o1[1]).zero());
    EXPECT_TRUE(is_zero(o1[0] - o2[0]).zero() && is_zero(o1[1] - o2[1]).zero());
  }
}

TEST(Closure, ListedSymmetriesOfEveryEntryClose) {
  const Catalog cat = load_catalog();
  std::mt19937_64 rng(11);
  for (int m : {1, 2}) {
    for (const auto& e : cat.entries) {
      const auto c = entry_closure(cat, e, m, rng);
      EXPECT_TRUE(c.result.closed) << e.id << " m=" << m << " at " << c.point;
    }
  }
}

TEST(Closure, PsiFamiliesNeedTheFamilyRefit) {
  // [D + DR + t Dv, P0] = -P0 + Dv leaves a constant Dv, a member of the Psi Dv family
  const Catalog cat = load_catalog();
  std::mt19937_64 rng(5);
  const auto& e = cat.entry("T2.9");
  const Instance in = instantiate(cat, e, *draw_point(e, 1, {}, rng), 1);
  const auto gens = listed_symmetries(in);
  ClosureOptions opt;
  opt.system = &in.sys;
  const Decomposition d = decompose(commutator(gens[0], P0(1)), {gens[0], gens[1], P0(1), P(1, 1)}, opt);
  ASSERT_TRUE(d.ok);
  EXPECT_TRUE(d.family);
  EXPECT_EQ(d.coeffs[2], -1);
  opt.system = nullptr;
  EXPECT_FALSE(decompose(commutator(gens[0], P0(1)), {gens[0], gens[1], P0(1), P(1, 1)}, opt).ok);
}
