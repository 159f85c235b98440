#include <gtest/gtest.h>

#include "rdsym/catalog/catalog.hpp"
#include "rdsym/numeric/transport.hpp"

using namespace rdsym;

namespace {

RDSystem system_of(const Rational& a, const std::string& f1, const std::string& f2, int m = 1) {
  return RDSystem(m, DiffusionMatrix(Expr(a)), {parse(f1), parse(f2)});
}

// w_t = i Delta w + i w ln|w|
RDSystem log_nls() {
  static const Catalog cat = load_catalog();
  ParamPoint p;
  p["a"] = 0;
  p["mu"] = 0;
  p["sigma"] = 1;
  p["lambda"] = 0;
  p["nu"] = 0;
  return instantiate(cat, cat.entry("T3.1"), p, 1).sys;
}

// (-1 + i)|w|^2 w, a = 1/2
RDSystem cgl() { return system_of(Rational(1, 2), "-(u^2+v^2)*(u+v)", "(u^2+v^2)*(u-v)"); }

Grid transport_grid(int n) {
  Grid g;
  g.n = n;
  g.L = 20 * M_PI;
  g.tau = g.h() / 2;
  return g;
}

FieldState background(const Grid& g) {
  return sample_state(g, [&](const auto& x) { return cplx(1 + 0.3 * std::cos(4 * M_PI * x[0] / g.L), 0); });
}

}  // namespace

TEST(Solver, ConstantStatesStayConstant) {
  Grid g;
  g.n = 64;
  g.tau = 1e-2;
  const auto ic = sample_state(g, [](const auto&) { return cplx(0.7, -0.2); });
  const auto tr = integrate(system_of(1, "0", "0"), g, ic, 1.0);
  for (const auto& z : tr.states.back().w) EXPECT_LT(std::abs(z - cplx(0.7, -0.2)), 1e-13);
  // |w| = 1 is a fixed point of the log-NLS source
  const auto one = sample_state(g, [](const auto&) { return cplx(0.6, 0.8); });
  Grid h = g;
  h.L = 20 * M_PI;
  const auto tr2 = integrate(log_nls(), h, one, 1.0);
  for (const auto& z : tr2.states.back().w) EXPECT_LT(std::abs(z - cplx(0.6, 0.8)), 1e-13);
}

TEST(Solver, FourierModeDecay) {
  // w = e^{-(1+i) t} cos x solves w_t = (1+i) w_xx
  Grid g;
  g.n = 256;
  g.L = 2 * M_PI;
  g.tau = 1e-4;
  const auto ic = sample_state(g, [](const auto& x) { return cplx(std::cos(x[0]), 0); });
  const auto tr = integrate(system_of(1, "0", "0"), g, ic, 0.1, {1000});
  ASSERT_EQ(tr.states.size(), 2u);
  EXPECT_NEAR(tr.states.back().t, 0.1, 1e-12);
  const cplx fac = std::exp(-cplx(1, 1) * 0.1);
  double err = 0, ref = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(tr.states.back().w[k] - fac * ic.w[k]));
    ref = std::max(ref, std::abs(fac * ic.w[k]));
  }
  EXPECT_LT(err / ref, 1e-4);
}

TEST(Solver, FourierModeDecayInTwoDimensions) {
  Grid g;
  g.m = 2;
  g.n = 64;
  g.tau = 1e-3;
  const auto ic = sample_state(g, [](const auto& x) { return cplx(std::sin(x[0]) * std::cos(2 * x[1]), 0); });
  const auto tr = integrate(system_of(2, "0", "0", 2), g, ic, 0.05, {50});
  const cplx fac = std::exp(-cplx(2, 1) * 5.0 * 0.05);
  double err = 0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(tr.states.back().w[k] - fac * ic.w[k]));
  EXPECT_LT(err, 2e-3);
}

TEST(Solver, RejectsIllPosedInput) {
  Grid g;
  g.n = 32;
  const auto ic = sample_state(g, [](const auto&) { return cplx(1, 0); });
  EXPECT_THROW(integrate(system_of(-1, "0", "0"), g, ic, 0.1), NumericError);
  EXPECT_THROW(integrate(system_of(1, "0", "0", 2), g, ic, 0.1), NumericError);
  RDSystem with_param(1, DiffusionMatrix(Expr(1)), {parse("lambda*u", ParseContext().with_params({"lambda"})), Expr(0)});
  EXPECT_THROW(integrate(with_param, g, ic, 0.1), NumericError);
  Grid bad = g;
  bad.tau = 0;
  EXPECT_THROW(integrate(system_of(1, "0", "0"), bad, ic, 0.1), NumericError);
}

TEST(Solver, DetectsBlowUp) {
  // u_t = u^3 from u = 2 blows up at t = 1/8
  Grid g;
  g.n = 16;
  g.tau = 1e-4;
  const auto ic = sample_state(g, [](const auto&) { return cplx(2, 0); });
  try {
    integrate(system_of(1, "u^3", "0"), g, ic, 1.0);
    FAIL() << "no divergence reported";
  } catch (const DivergenceError& e) {
    EXPECT_NEAR(e.time(), 0.125, 2e-3);
  }
}

TEST(Solver, CglTrajectoryStaysBounded) {
  Grid g;
  g.n = 128;
  g.L = 20 * M_PI;
  g.tau = 1e-2;
  const auto ic = sample_state(g, [&](const auto& x) { return cplx(1 + 0.5 * std::sin(2 * M_PI * x[0] / g.L), 0.2); });
  const auto tr = integrate(cgl(), g, ic, 5.0, {100});
  for (const auto& s : tr.states) EXPECT_LE(s.max_abs(), ic.max_abs() + 1e-12);
  // regression value of the run
  EXPECT_NEAR(tr.states.back().max_abs(), 0.31155318422186795, 1e-8);
}

TEST(Flow, ClosedFormsMatchTheOdeFlow) {
  const DiffusionMatrix A(Expr(Rational(1, 3)));
  FlowOptions ode;
  ode.closed_forms = false;
  const std::array<double, 3> x0{0.4, -1.1, 0.3};
  for (const Generator& X : {P(2, 1), Dil(2), Gal(2, 1, A), Gal(2, 2, A), Jrot(2, 1, 2), P0(2)}) {
    const CompiledGenerator g(X, A);
    EXPECT_FALSE(g.closed_form().empty()) << X.label;
    for (double th : {-0.7, 0.3, 1.2}) {
      const auto a = g(th, 0.8, x0), b = g(th, 0.8, x0, ode);
      EXPECT_NEAR(a.t, b.t, 1e-8) << X.label;
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.x[k], b.x[k], 1e-8) << X.label;
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(a.M[k], b.M[k], 1e-8) << X.label;
    }
  }
}

TEST(Flow, Examples) {
  const DiffusionMatrix A(Expr(0));
  const std::array<double, 3> x0{1.0, 0, 0};
  const auto p = flow(P(1, 1), A, 0.5, 2.0, x0);
  EXPECT_DOUBLE_EQ(p.x[0], 1.5);
  EXPECT_DOUBLE_EQ(p.t, 2.0);
  const auto d = flow(Dil(1), A, std::log(4.0), 2.0, x0);
  EXPECT_NEAR(d.t, 8.0, 1e-12);
  EXPECT_NEAR(d.x[0], 2.0, 1e-12);
  // a = 0: the boost multiplies w by exp(i(theta x + theta^2 t/2)/2)
  const auto g = flow(Gal(1, 1, A), A, 0.2, 2.0, x0);
  EXPECT_NEAR(g.x[0], 1.4, 1e-12);
  const cplx want = std::exp(cplx(0, 1) * (0.2 * 1.0 + 0.04 * 2.0 / 2) / 2.0);
  EXPECT_NEAR(std::abs(g.apply(1.0) - want), 0, 1e-12);
  // affine tail -(U + (1, 0)) d_U: U' = e^{-theta} U + (e^{-theta} - 1)(1, 0)
  const Generator tail = Tail(1, Mat2::identity(), {Expr(1), Expr(0)});
  const auto f = flow(tail, A, 0.3, 0, x0);
  EXPECT_EQ(f.method, "ode");
  const cplx w = f.apply(cplx(2, 1));
  EXPECT_NEAR(w.real(), std::exp(-0.3) * 2 + std::exp(-0.3) - 1, 1e-9);
  EXPECT_NEAR(w.imag(), std::exp(-0.3), 1e-9);
}

TEST(Flow, CompositionLaw) {
  const DiffusionMatrix A(Expr(Rational(1, 2)));
  const Generator K = Conf(1, A);
  const Generator mix = Tail(1, Mat2(Expr(0), parse("x1"), parse("-x1"), Expr(0)), {t_(), Expr(1)}) + P0(1);
  for (const Generator& X : {K, mix, Gal(1, 1, A)}) {
    const CompiledGenerator g(X, A);
    FlowOptions ode;
    ode.closed_forms = false;
    EXPECT_LT(composition_defect(g, 0.11, 0.07, 0.5, {0.3, 0, 0}, cplx(0.4, -0.9), ode), 1e-8) << X.label;
    EXPECT_LT(composition_defect(g, -0.2, 0.35, 0.5, {-0.6, 0, 0}, cplx(1.2, 0.1), ode), 1e-8) << X.label;
  }
}

TEST(Flow, ReportsFiniteEscape) {
  // K moves t along t' = t / (1 - 2 theta t), which escapes at theta = 1/(2t) = 0.5
  const DiffusionMatrix A(Expr(1));
  try {
    flow(Conf(1, A), A, 2.0, 1.0, {0.1, 0, 0});
    FAIL() << "no escape reported";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
  }
  EXPECT_NO_THROW(flow(Conf(1, A), A, 0.4, 1.0, {0.1, 0, 0}));
}

TEST(Transport, InterpolationIsExactOnCubics) {
  Grid g;
  g.n = 32;
  g.L = 8;
  g.tau = 0.1;
  Trajectory tr;
  tr.grid = g;
  for (int k = 0; k < 6; ++k) {
    const double t = 0.1 * k;
    tr.states.push_back(sample_state(g, [&](const auto& x) { return cplx(std::sin(2 * M_PI * x[0] / 8), t * t * t); }, t));
  }
  const auto r = interpolate(tr, 0.234, {0.51, 0, 0});
  EXPECT_NEAR(r.value.imag(), 0.234 * 0.234 * 0.234, 1e-12);
  EXPECT_NEAR(r.value.real(), std::sin(2 * M_PI * 0.51 / 8), 1e-4);
  EXPECT_LT(r.error, 1e-4);
  EXPECT_THROW(interpolate(tr, 0.6, {0, 0, 0}), NumericError);
}

TEST(Transport, GridShiftKeepsTheResidual) {
  const Grid g = transport_grid(256);
  const auto r = symmetry_transport_residual(log_nls(), P(1, 1), 5 * g.h(), g, background(g), 1.0);
  EXPECT_EQ(r.method, "P");
  EXPECT_NEAR(r.transported, r.baseline, 1e-9 * r.baseline);
}

TEST(Transport, GalileiBoostOfLogNls) {
  const RDSystem sys = log_nls();
  double prev = 1e300;
  for (int n : {256, 512, 1024}) {
    const Grid g = transport_grid(n);
    const auto r = symmetry_transport_residual(sys, Gal(1, 1, sys.A), 0.2, g, background(g), 1.0);
    EXPECT_EQ(r.method, "G");
    EXPECT_LE(r.transported, 5 * r.baseline) << n;
    EXPECT_LT(r.transported, prev / 3) << n;
    prev = r.transported;
  }
}

TEST(Transport, FlippedBoostSignIsNotASymmetry) {
  const RDSystem sys = log_nls();
  const Grid g = transport_grid(512);
  const auto r = symmetry_transport_residual(sys, Gal(1, 1, sys.A, GalileiSign::Flipped), 0.2, g, background(g), 1.0);
  EXPECT_GT(r.transported, 1e-2);
  EXPECT_GT(r.transported, 100 * r.baseline);
}

TEST(Transport, CglControlStalls) {
  const RDSystem sys = cgl();
  std::vector<double> res;
  for (int n : {256, 512, 1024}) {
    const Grid g = transport_grid(n);
    res.push_back(symmetry_transport_residual(sys, Gal(1, 1, sys.A), 0.2, g, background(g), 1.0).transported);
  }
  for (double r : res) EXPECT_GT(r, 1.0);
  EXPECT_GT(res[2], res[0] / 2);
}
