#include <gtest/gtest.h>

#include "rdsym/symmetry/operators.hpp"

using namespace rdsym;

namespace {

struct Instance {
  int m;
  ParseContext ctx;
  Substitution vals;

  Instance(int dim, std::initializer_list<std::pair<const char*, const char*>> ps) : m(dim) {
    ctx = with_space_macros({}, m);
    for (const auto& [k, v] : ps) ctx.params.insert(k);
    for (const auto& [k, v] : ps) vals.bind(Symbol::param(k), parse(v, ctx));
  }
  Expr operator()(const std::string& s) const { return subst(parse(s, ctx), vals); }
  RDSystem system(const std::string& a, const std::string& f1, const std::string& f2) const {
    return RDSystem(m, DiffusionMatrix((*this)(a)), {(*this)(f1), (*this)(f2)});
  }
  Generator gen(const RDSystem& sys, const std::string& g, const std::string& gamma = "0") const {
    Generator X = parse_generator(g, ctx, {m, sys.A, (*this)(gamma)});
    X.eta = subst(X.eta, vals);
    for (auto& x : X.xi) x = subst(x, vals);
    X.pi = {subst(X.pi[0], vals), subst(X.pi[1], vals)};
    return X;
  }
};

bool symmetric(const RDSystem& sys, const Generator& X) { return is_symmetry(sys, X); }

}  // namespace

TEST(Prolong, TimeTranslationHasZeroCoefficients) {
  const Prolongation pr = prolong2(P0(2));
  for (const auto& [s, c] : pr.coeff) EXPECT_TRUE(c.is_zero()) << render(s);
}

TEST(Prolong, DilatationCoefficients) {
  const Prolongation pr = prolong2(Dil(2));
  for (int b = 1; b <= 2; ++b) {
    EXPECT_TRUE(proven_zero(pr.at(Symbol::jet(b, 0, {1, 0, 0})) + rational(1, 2) * jet(b, 0, {1, 0, 0})));
    EXPECT_TRUE(proven_zero(pr.at(Symbol::jet(b, 0, {2, 0, 0})) + jet(b, 0, {2, 0, 0})));
    EXPECT_TRUE(proven_zero(pr.at(Symbol::jet(b, 0, {1, 1, 0})) + jet(b, 0, {1, 1, 0})));
    EXPECT_TRUE(proven_zero(pr.at(Symbol::jet(b, 1)) + jet(b, 1)));
  }
}

TEST(Prolong, GalileiFirstOrderCoefficient) {
  const DiffusionMatrix A(Expr(1));
  const Prolongation pr = prolong2(Gal(1, 1, A));
  const Vec2 AiU = A.inverse() * U_();
  for (int b = 1; b <= 2; ++b) {
    const Expr c = pr.at(Symbol::jet(b, 0, {1, 0, 0}));
    const Expr at_zero_x = subst(c, Symbol::space(1), Expr(0));
    EXPECT_TRUE(proven_zero(at_zero_x + rational(1, 2) * AiU[static_cast<std::size_t>(b - 1)]));
  }
}

TEST(Invariance, TimeTranslationAlwaysSymmetry) {
  RDSystem sys(2, DiffusionMatrix(param("a")), cgl_source(param("alpha")));
  const Vec2 r = invariance_residual(sys, P0(2));
  EXPECT_TRUE(proven_zero(r[0]));
  EXPECT_TRUE(proven_zero(r[1]));
}

TEST(Invariance, TableOneItemTwoInstance) {
  Instance I(2, {{"nu", "1"}, {"sigma", "2"}, {"lambda", "1"}, {"mu", "1"}});
  const auto sys = I.system("1", "exp(nu*z)*R^sigma*(lambda*u - mu*v)", "exp(nu*z)*R^sigma*(lambda*v + mu*u)");
  EXPECT_TRUE(symmetric(sys, I.gen(sys, "sigma*D - DR")));
  EXPECT_TRUE(symmetric(sys, I.gen(sys, "nu*D - Dz")));
}

TEST(Invariance, CglNotGalileiInvariant) {
  RDSystem sys(1, DiffusionMatrix(Expr(1)), cgl_source(Expr(1)));
  const PairVerdict v = verdict(invariance_residual(sys, Gal(1, 1, sys.A)));
  EXPECT_FALSE(v.zero());
  const bool some_nonzero =
      v.component[0].kind == ZeroKind::NonZero || v.component[1].kind == ZeroKind::NonZero;
  EXPECT_TRUE(some_nonzero);
}

TEST(Invariance, FlippedGalileiSignFails) {
  // f = 0 admits G for every a; only the standard sign passes
  RDSystem sys(1, DiffusionMatrix(rational(1, 3)), {Expr(0), Expr(0)});
  EXPECT_TRUE(symmetric(sys, Gal(1, 1, sys.A)));
  EXPECT_FALSE(symmetric(sys, Gal(1, 1, sys.A, GalileiSign::Flipped)));
}

TEST(Invariance, JetOrderGuard) {
  RDSystem sys(1, DiffusionMatrix(Expr(1)), {Expr(0), Expr(0)});
  Generator X(1);
  X.eta = x_(1);  // not a point symmetry shape for evolution systems; 3-jets survive
  EXPECT_THROW(invariance_residual(sys, X), JetOrderError);
}

TEST(Classifying, LinearDilatation) {
  GeneratorTemplate T(1);
  T.mu = 1;
  RDSystem sys(1, DiffusionMatrix(Expr(2)), {Expr(0), Expr(0)});
  EXPECT_TRUE(check_classifying(sys, T).zero());
}

TEST(Classifying, TableTwoItemThree) {
  Instance I(1, {{"kappa", "3/2"}});
  const auto sys = I.system("1/3", "exp(kappa*v)*F1(u)", "exp(kappa*v)*F2(u)");
  GeneratorTemplate T(1);
  T.mu = I("kappa");
  T.B = {Expr(0), Expr(1)};  // pi = (0, 1) is -d_v
  EXPECT_TRUE(check_classifying(sys, T).zero());
  EXPECT_TRUE(symmetric(sys, T.expand(sys.A)));
  T.mu = I("kappa + 1");
  EXPECT_FALSE(check_classifying(sys, T).zero());
}

TEST(Classifying, TableTwoItemTwoHarmonic) {
  for (int m = 1; m <= 3; ++m) {
    Instance I(m, {});
    const auto sys = I.system("2", "F1(v)", "F2(v)");
    GeneratorTemplate T(m);
    T.B = {psi(Expr(0), m, {0, 0, 0}), Expr(0)};
    EXPECT_TRUE(check_classifying(sys, T).zero()) << m;
    EXPECT_TRUE(symmetric(sys, T.expand(sys.A))) << m;
  }
}

TEST(Classifying, TemplateAgreesWithGeneralForm) {
  Instance I(2, {});
  const auto sys = I.system("1/2", "u*(u^2+v^2)", "v*(u^2+v^2)");
  GeneratorTemplate T(2);
  T.lambda = 1;
  T.sigma = {Expr(2), Expr(-1)};
  T.mu = 3;
  T.C = Mat2(t_(), Expr(1), Expr(-1), t_());
  T.B = {x_(1) * t_(), exp(t_())};
  const Vec2 a = classifying_template(sys, T);
  const Vec2 b = classifying_general(sys, T.expand(sys.A));
  EXPECT_TRUE(is_zero(a[0] - b[0]).zero());
  EXPECT_TRUE(is_zero(a[1] - b[1]).zero());
}

TEST(Structure, RotationConformalAndBareBoost) {
  const DiffusionMatrix A(rational(2, 5));
  EXPECT_TRUE(check_structure(Jrot(2, 1, 2), A).ok());
  for (int m = 1; m <= 3; ++m) EXPECT_TRUE(check_structure(Conf(m, A), A).ok()) << m;
  Generator bare(1);
  bare.xi[0] = t_();
  const StructureReport rep = check_structure(bare, A);
  EXPECT_FALSE(rep.ok());
  bool xi_t_failed = false;
  for (const auto& c : rep.checks) {
    if (c.equation == "xi_t[1]") xi_t_failed = !c.verdict.zero();
  }
  EXPECT_TRUE(xi_t_failed);
  EXPECT_TRUE(check_structure(Gal(1, 1, A), A).ok());
  EXPECT_FALSE(check_structure(Gal(1, 1, A, GalileiSign::Flipped), A).ok());
}

TEST(Extension, GalileiFamily) {
  Instance I(2, {});
  const auto sys = I.system("1/2", "u*(R*exp(z/2))^3 + v*ln(R*exp(z/2))",
                            "v*(R*exp(z/2))^3 - u*ln(R*exp(z/2))");
  const ExtensionFlags fl = extension_conditions(sys);
  EXPECT_TRUE(fl.galilei);
  EXPECT_FALSE(fl.conformal);
  for (int mu = 1; mu <= 2; ++mu) EXPECT_TRUE(symmetric(sys, Gal(2, mu, sys.A)));
  EXPECT_TRUE(symmetric(sys, Ainv_field(2, sys.A)));
}

TEST(Extension, CriticalPower) {
  for (int m = 1; m <= 3; ++m) {
    Instance I(m, {{"rho", "4/m"}, {"a", "3/4"}, {"l", "1/2"}, {"s", "-2"}});
    const auto sys = I.system("a", "exp(a*rho*z)*R^rho*(l*u - s*v)", "exp(a*rho*z)*R^rho*(l*v + s*u)");
    const ExtensionFlags fl = extension_conditions(sys);
    EXPECT_TRUE(fl.galilei && fl.conformal) << m;
    EXPECT_TRUE(symmetric(sys, Conf(m, sys.A))) << m;
  }
  Instance I(2, {{"rho", "3"}, {"a", "3/4"}});
  const auto sys = I.system("a", "exp(a*rho*z)*R^rho*u", "exp(a*rho*z)*R^rho*v");
  const ExtensionFlags fl = extension_conditions(sys);
  EXPECT_TRUE(fl.galilei);
  EXPECT_FALSE(fl.conformal);
  EXPECT_FALSE(symmetric(sys, Conf(2, sys.A)));
}

TEST(Extension, ExponentialGalileiExponent) {
  Instance I(1, {{"mu", "1/2"}, {"kappa", "2/3"}});
  const auto sys = I.system("mu", "u*F1(R*exp(mu*z)) + v*F2(R*exp(mu*z)) - kappa*z*(mu*u+v)",
                            "v*F1(R*exp(mu*z)) - u*F2(R*exp(mu*z)) + kappa*z*(u-mu*v)");
  const ExtensionFlags fl = extension_conditions(sys);
  ASSERT_TRUE(fl.gamma.has_value());
  EXPECT_EQ(*fl.gamma, rational(2, 3));
  EXPECT_TRUE(symmetric(sys, GalExp(1, 1, *fl.gamma, sys.A)));
  EXPECT_FALSE(symmetric(sys, GalExp(1, 1, rational(-2, 3), sys.A)));
}

TEST(Operators, ParseErrors) {
  ParseContext c;
  OperatorContext oc{1, DiffusionMatrix(Expr(1)), Expr(0)};
  EXPECT_THROW(parse_generator("D*D", c, oc), ParseError);
  EXPECT_THROW(parse_generator("u*Du", c, oc), ParseError);
  EXPECT_THROW(parse_generator("D + 1", c, oc), ParseError);
  EXPECT_NO_THROW(parse_generator("exp(2*t)*(DR - Dz) + x1*Du", c, oc));
}
