#pragma once

// Fundamental solutions of F_t = lambda F + nu G, G_t = sigma F + gamma G and the
// operator realizations of the tail algebras.

#include "rdsym/algebra/tails.hpp"
#include "rdsym/symmetry/classify.hpp"

namespace rdsym {

struct FundamentalPair {
  Expr F1, G1, F2, G2;
  std::string branch;  // repeated, real, complex
};

/// Columns of exp(t M), M = (lambda nu; sigma gamma). With M = tau I + N and
/// N^2 = delta I, exp(t M) = e^{tau t}(a(t) I + b(t) N).
inline FundamentalPair fundamental_pair(const Rational& lambda, const Rational& nu, const Rational& sigma,
                                        const Rational& gamma) {
  const Expr t = t_();
  const Rational tau = (lambda + gamma) / 2, h = (lambda - gamma) / 2;
  const Rational delta = h * h + nu * sigma;
  FundamentalPair p;
  Expr a, b;
  if (delta == 0) {
    a = Expr(1);
    b = t;
    p.branch = "repeated";
  } else if (delta > 0) {
    const Expr s = pow(Expr(delta), Rational(1, 2));
    a = rational(1, 2) * (exp(s * t) + exp(-s * t));
    b = rational(1, 2) * (exp(s * t) - exp(-s * t)) / s;
    p.branch = "real";
  } else {
    const Expr w = pow(Expr(-delta), Rational(1, 2));
    a = cos(w * t);
    b = sin(w * t) / w;
    p.branch = "complex";
  }
  const Expr e = exp(Expr(tau) * t);
  p.F1 = simplify(e * (a + Expr(h) * b));
  p.G1 = simplify(e * Expr(sigma) * b);
  p.F2 = simplify(e * Expr(nu) * b);
  p.G2 = simplify(e * (a - Expr(h) * b));
  return p;
}

struct Realization {
  std::string name;     // algebra and index, e.g. "A_{2,3} #1"
  std::string algebra;  // A_{k,j} the tails come from
  std::vector<Generator> basis;
};

struct RealizationParams {
  Rational mu{1, 2}, nu{-2, 3}, alpha{1, 3};
  std::array<Rational, 4> system{Rational(1), Rational(2), Rational(-1), Rational(1, 2)};  // lambda nu sigma gamma
  bool tilde_g4 = false;  // use a conjugate of g4 in the four-dimensional algebra
};

namespace detail {

inline Generator lin(std::initializer_list<std::pair<Expr, Generator>> terms, int m, const std::string& label) {
  Generator g(m);
  for (const auto& [c, X] : terms) g += X.scaled(c);
  g = g.simplified();
  g.label = label;
  return g;
}

}  // namespace detail

/// The realizations listed for the two-, three- and four-dimensional tail
/// algebras, at the given parameter values.
inline std::vector<Realization> realizations(int m, const RealizationParams& rp = {}) {
  using detail::lin;
  const Expr mu(rp.mu), nu(rp.nu), t = t_(), one(1), two(2);
  const Generator D = Dil(m);
  const FundamentalPair fp = fundamental_pair(rp.system[0], rp.system[1], rp.system[2], rp.system[3]);
  auto hats = [&](std::vector<TailMatrix> es) {
    std::vector<Generator> out;
    for (std::size_t i = 0; i < es.size(); ++i) {
      Generator g = tail_field(es[i], m);
      g.label = "e" + std::to_string(i + 1);
      out.push_back(g);
    }
    return out;
  };
  std::vector<Realization> out;
  const std::vector<std::pair<std::string, std::vector<TailMatrix>>> two_dim{{"A_{2,1}", {g1(), g3(rp.alpha)}},
                                                                             {"A_{2,2}", {g2(), g4()}}};
  for (const auto& [alg, es] : two_dim) {
    const auto e = hats(es);
    out.push_back({alg + " #1", alg, {lin({{mu, D}, {one, e[0]}, {nu * t, e[1]}}, m, "muD+e1+nu t e2"), e[1]}});
    out.push_back({alg + " #2", alg, {lin({{mu, D}, {one, e[1]}, {nu * t, e[0]}}, m, "muD+e2+nu t e1"), e[0]}});
    out.push_back({alg + " #3", alg, {lin({{mu, D}, {-one, e[0]}}, m, "muD-e1"), lin({{nu, D}, {-one, e[1]}}, m, "nuD-e2")}});
    out.push_back({alg + " #4", alg,
                   {lin({{fp.F1, e[0]}, {fp.G1, e[1]}}, m, "F1e1+G1e2"), lin({{fp.F2, e[0]}, {fp.G2, e[1]}}, m, "F2e1+G2e2")}});
  }
  {
    const auto e = hats({g1(), g2()});
    out.push_back({"A_{2,3} #1", "A_{2,3}", {lin({{mu, D}, {-one, e[0]}}, m, "muD-e1"), e[1]}});
    out.push_back({"A_{2,3} #2", "A_{2,3}", {lin({{mu, D}, {one, e[0]}, {nu * t, e[1]}}, m, "muD+e1+nu t e2"), e[1]}});
  }
  {
    const auto e = hats({g1(), g2(), g4()});
    out.push_back({"A_{3,1} #1", "A_{3,1}", {lin({{mu, D}, {-two, e[0]}}, m, "muD-2e1"), e[1], e[2]}});
    out.push_back({"A_{3,1} #2", "A_{3,1}", {lin({{one, D}, {two, e[0]}, {two * nu * t, e[1]}}, m, "D+2e1+2nu t e2"), e[1], e[2]}});
    out.push_back({"A_{3,1} #3", "A_{3,1}", {lin({{one, D}, {two, e[0]}, {two * nu * t, e[2]}}, m, "D+2e1+2nu t e3"), e[2], e[1]}});
    out.push_back({"A_{3,1} #4", "A_{3,1}",
                   {e[0], lin({{fp.F1, e[1]}, {fp.G1, e[2]}}, m, "F1e2+G1e3"),
                    lin({{fp.F2, e[1]}, {fp.G2, e[2]}}, m, "F2e2+G2e3")}});
  }
  {
    const auto e = hats({g2(), g3(rp.alpha), g4()});
    out.push_back({"A_{3,2} #1", "A_{3,2}", {lin({{mu, D}, {-two, e[0]}}, m, "muD-2e1"), e[1], e[2]}});
    out.push_back({"A_{3,2} #2", "A_{3,2}", {e[0], lin({{one, D}, {two, e[1]}, {two * mu * t, e[2]}}, m, "D+2e2+2mu t e3"), e[2]}});
  }
  {
    TailMatrix e3 = g4();
    if (rp.tilde_g4) e3 = ConjugatorU{Rational(1), Rational(-2), Rational(2), Rational(1)}.conjugate(g4());
    const auto e = hats({g1(), g3(rp.alpha), e3, g2()});
    std::vector<Expr> w{mu * t};
    for (int i = 1; i <= m; ++i) w.push_back(nu * Expr(Rational(i)) * x_(i));
    const Expr phi = exp(sum(w));
    out.push_back({"A_{4,1} #1", "A_{4,1}", {lin({{mu, D}, {-two, e[0]}}, m, "muD-2e1"), lin({{nu, D}, {-two, e[1]}}, m, "nuD-2e2"), e[2], e[3]}});
    out.push_back({"A_{4,1} #2", "A_{4,1}", {e[0], e[1], lin({{phi, e[2]}}, m, "phi e3"), lin({{phi, e[3]}}, m, "phi e4")}});
  }
  return out;
}

/// For <F e^, G e^> the classifying equations of the two generators combine to
/// G R(F e^) - F R(G e^) = (G F_t - F G_t) e^-drift, which does not involve the
/// source. A nonzero value shows that no source admits both.
inline Vec2 pair_obstruction(const RDSystem& sys, const TailMatrix& e, const Expr& F, const Expr& G) {
  const Generator h = tail_field(e, sys.m);
  const Vec2 rf = classifying_general(sys, h.scaled(F));
  const Vec2 rg = classifying_general(sys, h.scaled(G));
  return {simplify(G * rf[0] - F * rg[0]), simplify(G * rf[1] - F * rg[1])};
}

}  // namespace rdsym
