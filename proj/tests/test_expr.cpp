#include <gtest/gtest.h>

#include "rdsym/expr.hpp"

using namespace rdsym;

namespace {

ParseContext ctx() {
  ParseContext c;
  c.params = {"a", "k", "sigma"};
  c.dim = 2;
  return c;
}

Expr P(const std::string& s) { return parse(s, ctx()); }

}  // namespace

TEST(Expr, PolarIdentitySimplifiesToZero) {
  EXPECT_TRUE(simplify(R_() * R_() - u_() * u_() - v_() * v_()).is_zero());
  EXPECT_TRUE(proven_zero(P("R^4 - (u^2+v^2)^2")));
}

TEST(Expr, DerivativeOfRadius) {
  EXPECT_EQ(simplify(diff(R_(), Symbol::jet(1)) - u_() / R_()), Expr(0));
  EXPECT_TRUE(proven_zero(diff(z_(), Symbol::jet(2)) - u_() / (u_() * u_() + v_() * v_())));
}

TEST(Expr, TotalDerivativeRespectsJetOrder) {
  Expr d = total_derivative(P("u_x1"), Symbol::space(1));
  EXPECT_EQ(render(d), "u_x1x1");
  EXPECT_THROW(total_derivative(P("u_x1x1"), Symbol::space(2)), JetOrderError);
}

TEST(Expr, ExpLogCollapse) {
  EXPECT_EQ(simplify(P("exp(ln(u))")), u_());
  EXPECT_TRUE(proven_zero(P("exp(k*ln(R)) - R^k")));
}

TEST(Expr, TrigIdentity) { EXPECT_TRUE(proven_zero(P("sin(z)^2 + cos(z)^2 - 1"))); }

TEST(Expr, OpaqueChainRule) {
  Expr e = diff(P("F1(R)"), Symbol::jet(1));
  EXPECT_TRUE(proven_zero(e - P("F1_d1(R)*u/R")));
}

TEST(Expr, PsiLaplaceRewrite) {
  EXPECT_TRUE(proven_zero(P("Psi_x1x1(k) + Psi_x2x2(k) - k*Psi(k)")));
}

TEST(Expr, NumericVerdicts) {
  auto nz = is_zero(P("u^2 + 1"));
  EXPECT_EQ(nz.kind, ZeroKind::NonZero);
  EXPECT_FALSE(nz.witness.empty());
  EXPECT_EQ(is_zero(P("u - u")).kind, ZeroKind::ProvenZero);
}

TEST(Expr, RenderParseRoundTrip) {
  for (const char* s : {"u^2*v - 3/2*R^(-1)", "exp(a*t)*x1 + sin(z)", "F1_d2(R)*u_tx1 - Psi_x2(k)"}) {
    Expr e = P(s);
    EXPECT_EQ(P(render(e)), e) << render(e);
  }
}

TEST(Expr, SubstitutionReexpressesPolar) {
  Substitution s;
  s.bind(Symbol::jet(1), P("2*u"));
  s.bind(Symbol::jet(2), P("2*v"));
  EXPECT_TRUE(proven_zero(subst(R_(), s) - 2 * R_()));
  EXPECT_TRUE(proven_zero(subst(z_(), s) - z_()));
}

TEST(Expr, ParseErrorsCarryPosition) {
  try {
    P("u + foo");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position, 4u);
  }
}
