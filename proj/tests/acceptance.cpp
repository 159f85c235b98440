// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>

#include "rdsym/algebra/realizations.hpp"
#include "rdsym/catalog/closure.hpp"
#include "rdsym/equivalence/claims.hpp"
#include "rdsym/numeric/transport.hpp"

using namespace rdsym;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

const Catalog& cat() {
  static const Catalog c = load_catalog();
  return c;
}

Rational rnd(std::mt19937_64& rng, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, 5);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string first_failure(const EntryReport& r, const std::function<bool(const CheckRecord&)>& skip = nullptr) {
  for (const auto& c : r.records) {
    if (!c.passed && !(skip && skip(c))) return to_json(c).dump();
  }
  return "";
}

Outcome main_symmetries() {
  VerifyOptions o;
  o.dims = {1, 2, 3};
  o.samples = 5;
  o.guards = false;
  o.perturb = false;
  std::size_t checks = 0;
  std::set<std::string> fchoices;
  for (const auto& e : cat().entries) {
    const EntryReport r = verify_entry(cat(), e, o);
    if (!r.ok()) return {false, e.id + ": " + first_failure(r)};
    checks += r.count("main", true);
    for (const auto& c : r.records) fchoices.insert(c.fchoice);
  }
  return {o.zero.seeds >= 20, std::to_string(checks) + " main-symmetry checks (oracle and classifying), " +
                                  std::to_string(fchoices.size()) + " F choices, " + std::to_string(o.zero.seeds) +
                                  " sample points"};
}

Outcome guard_sharpness() {
  VerifyOptions o;
  o.dims = {1, 2, 3};
  o.samples = 2;
  o.main = false;
  o.perturb = false;
  std::size_t on = 0, off = 0;
  for (const auto& e : cat().entries) {
    const EntryReport r = verify_entry(cat(), e, o);
    if (!r.ok()) return {false, e.id + ": " + first_failure(r)};
    on += r.count("guard+", true);
    off += r.count("guard-", true);
  }
  // conformal symmetry of the power source exactly at sigma = 4/m
  const auto& e = cat().entry("T1.2");
  for (int m = 1; m <= 3; ++m) {
    for (const Rational& ds : {Rational(0), Rational(1, 3), Rational(-1)}) {
      ParamPoint p;
      p["a"] = Rational(1, 2);
      p["sigma"] = Rational(4, m) + ds;
      p["nu"] = p["a"] * p["sigma"];
      p["lambda"] = -1;
      p["mu"] = 2;
      const Instance in = instantiate(cat(), e, p, m);
      if (is_symmetry(in.sys, Conf(m, in.sys.A)) != (ds == 0)) {
        return {false, "K at m=" + std::to_string(m) + " sigma=" + p["sigma"].get_str()};
      }
    }
  }
  return {on > 0 && off > 0, std::to_string(on) + " on-guard passes, " + std::to_string(off) +
                                 " off-guard witnesses, K sharp at sigma = 4/m for m = 1..3"};
}

GeneratorTemplate template_of(const Generator& g) {
  GeneratorTemplate T(g.m);
  T.mu = simplify(diff(g.eta, Symbol::time()));
  T.C = g.N().map([](const Expr& e) { return simplify(e); });
  T.B = g.B();
  return T;
}

GeneratorTemplate scaled_sum(GeneratorTemplate a, const GeneratorTemplate& b, const Expr& k) {
  a.mu = simplify(a.mu + k * b.mu);
  for (std::size_t i = 0; i < 4; ++i) a.C.e[i] = simplify(a.C.e[i] + k * b.C.e[i]);
  a.B = {simplify(a.B[0] + k * b.B[0]), simplify(a.B[1] + k * b.B[1])};
  return a;
}

Outcome oracle_agreement() {
  const std::vector<std::pair<std::string, int>> systems{{"T1.1", 1}, {"T1.2", 2}, {"T2.1", 1}, {"T2.3", 2},
                                                         {"T2.5", 1}, {"T2.8", 1}, {"T3.1", 2}, {"T3.2", 1},
                                                         {"T3.3", 1}, {"T3.5", 2}};
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.5);
  std::size_t passes = 0, fails = 0;
  for (const auto& [id, m] : systems) {
    const auto& e = cat().entry(id);
    const auto p = draw_point(e, m, {}, rng);
    if (!p) return {false, id + ": no admissible point"};
    const Instance in = instantiate(cat(), e, *p, m);
    std::vector<GeneratorTemplate> mains;
    for (const auto& g : in.main()) mains.push_back(template_of(g));
    for (int k = 0; k < 100; ++k) {
      GeneratorTemplate T(m);
      T.nu = rnd(rng);
      for (int i = 0; i < m; ++i) T.rho[static_cast<std::size_t>(i)] = rnd(rng);
      if (m == 2) {
        const Rational w = rnd(rng);
        T.Psi[0][1] = w;
        T.Psi[1][0] = Rational(-w);
      }
      for (const auto& M : mains) {
        if (coin(rng)) T = scaled_sum(T, M, Expr(rnd(rng)));
      }
      if (coin(rng)) {
        switch (k % 5) {
          case 0: T.lambda = rnd(rng, 1, 3); break;
          case 1: T.sigma[0] = rnd(rng, 1, 3); break;
          case 2: T.mu = simplify(T.mu + rnd(rng, 1, 3)); break;
          case 3: {
            const Expr c = rnd(rng, 1, 3), d = rnd(rng) * t_();
            T.C = Mat2(simplify(T.C.e[0] + d), simplify(T.C.e[1] + c), simplify(T.C.e[2] - c), simplify(T.C.e[3] + d));
            break;
          }
          default: T.B = {simplify(T.B[0] + rnd(rng, 1, 3) * t_()), simplify(T.B[1] + x_(1))};
        }
      }
      const bool a = check_classifying(in.sys, T).zero();
      const bool b = verdict(invariance_residual(in.sys, T.expand(in.sys.A))).zero();
      if (a != b) {
        return {false, id + " template " + std::to_string(k) + ": classifying " + (a ? "zero" : "nonzero") +
                           ", oracle " + (b ? "zero" : "nonzero")};
      }
      (a ? passes : fails)++;
    }
  }
  return {passes > 0 && fails > 0, "1000 templates over 10 systems, 0 discrepancies (" + std::to_string(passes) +
                                       " symmetric, " + std::to_string(fails) + " not)"};
}

Outcome algebra_reproduction() {
  std::vector<std::size_t> counts;
  for (int d = 2; d <= 4; ++d) counts.push_back(enumerate_algebras(d).classes.size());
  if (counts != std::vector<std::size_t>{3, 2, 1}) {
    return {false, "classes " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
                       std::to_string(counts[2])};
  }
  std::mt19937_64 rng(500);
  for (int k = 0; k < 500; ++k) {
    const int which = k % 3;
    const Rational alpha = rnd(rng);
    const TailMatrix form = which == 0 ? g1() : which == 1 ? g2() : g3(alpha);
    Rational s = which == 1 ? Rational(1) : rnd(rng);
    if (s == 0) s = 1;
    ConjugatorU V{rnd(rng), rnd(rng), rnd(rng), rnd(rng)};
    while (V.K1 == 0 && V.K2 == 0) V.K1 = rnd(rng);
    const TailMatrix g(V.inverse() * (s * form).g * V.matrix());
    const CanonicalTail c = canonicalize_tail(g);
    if (!(c.matrix() == form) || !(c.U.conjugate(g) == c.scale * form)) {
      return {false, "conjugate " + std::to_string(k) + ": " + render(g.g)};
    }
  }
  return {true, "3/2/1 classes in dimensions 2/3/4; 500 conjugates canonicalized with exact conjugators"};
}

bool same(const Generator& a, const Generator& b) {
  const Generator d = (a - b).simplified();
  if (!is_zero(d.eta).zero() || !is_zero(d.pi[0]).zero() || !is_zero(d.pi[1]).zero()) return false;
  for (const auto& x : d.xi) {
    if (!is_zero(x).zero()) return false;
  }
  return true;
}

Outcome lie_closure() {
  std::mt19937_64 rng(11);
  std::size_t n = 0;
  for (int m : {1, 2, 3}) {
    for (const auto& e : cat().entries) {
      const auto c = entry_closure(cat(), e, m, rng);
      if (!c.result.closed) return {false, e.id + " m=" + std::to_string(m) + " at " + c.point};
      ++n;
    }
  }
  if (!(bracket(g1(), g2()) == g2())) return {false, "[g1, g2] != g2"};
  // the operator map reverses brackets, so [X1, X2] = -(coefficient of e1 in X1) X2
  std::size_t r23 = 0;
  for (int m : {1, 2}) {
    for (const auto& r : realizations(m)) {
      if (r.algebra != "A_{2,3}") continue;
      const Generator c = commutator(r.basis[0], r.basis[1]);
      if (!same(c, r.basis[1]) && !same(c, r.basis[1].scaled(Expr(-1)))) return {false, r.name + ": [X1, X2] is not a multiple of X2"};
      if (!closure_check(r.basis).closed) return {false, r.name + " does not close"};
      ++r23;
    }
  }
  return {true, std::to_string(n) + " entry closures (m = 1..3); [g1, g2] = g2 and " + std::to_string(r23) +
                    " A_{2,3} realizations close"};
}

Outcome aet_suite() {
  VerifyOptions o;
  o.dims = {1, 2};
  o.samples = 1;
  std::size_t ok = 0;
  std::vector<std::string> bad;
  for (const auto& e : cat().entries) {
    const EntryReport r = verify_aet_claims(cat(), e, o);
    for (const auto& c : r.records) {
      if (c.passed) {
        ++ok;
      } else {
        bad.push_back(c.entry + " " + c.subject + " (" + c.check + ", m=" + std::to_string(c.m) + ")");
      }
    }
  }
  std::string s = std::to_string(ok) + " AET checks pass";
  if (!bad.empty()) {
    s += ", " + std::to_string(bad.size()) + " fail: " + bad.front();
    if (bad.size() > 1) s += " ...";
  }
  return {bad.empty() && ok > 0, s};
}

Grid transport_grid(int n) {
  Grid g;
  g.n = n;
  g.L = 20 * M_PI;
  g.tau = g.h() / 2;
  return g;
}

Outcome numeric_transport() {
  ParamPoint p;
  p["a"] = 0;
  p["mu"] = 0;
  p["sigma"] = 1;
  p["lambda"] = 0;
  p["nu"] = 0;
  const RDSystem nls = instantiate(cat(), cat().entry("T3.1"), p, 1).sys;
  const RDSystem cgl(1, DiffusionMatrix(Expr(rational(1, 2))),
                     {parse("-(u^2+v^2)*(u+v)"), parse("(u^2+v^2)*(u-v)")});
  std::vector<double> base, tr, ctl;
  for (int n : {256, 512, 1024}) {
    const Grid g = transport_grid(n);
    const auto ic = sample_state(g, [&](const auto& x) { return cplx(1 + 0.3 * std::cos(4 * M_PI * x[0] / g.L), 0); });
    const auto r = symmetry_transport_residual(nls, Gal(1, 1, nls.A), 0.2, g, ic, 1.0);
    base.push_back(r.baseline);
    tr.push_back(r.transported);
    ctl.push_back(symmetry_transport_residual(cgl, Gal(1, 1, cgl.A), 0.2, g, ic, 1.0).transported);
  }
  bool pass = true;
  std::string s;
  for (std::size_t k = 0; k < 3; ++k) {
    pass = pass && tr[k] <= 5 * base[k];
    s += fmt("%.2e", tr[k]) + "/" + fmt("%.2e", base[k]) + (k < 2 ? ", " : "");
  }
  for (std::size_t k = 1; k < 3; ++k) {
    const double pt = std::log2(tr[k - 1] / tr[k]), pb = std::log2(base[k - 1] / base[k]);
    pass = pass && pt > 1 && std::abs(pt - pb) < 0.5;
    s += (k == 1 ? "; orders " : ", ") + fmt("%.2f", pt) + " vs " + fmt("%.2f", pb);
  }
  for (double c : ctl) pass = pass && c > 1;
  pass = pass && ctl[2] > ctl[0] / 2;
  s += "; CGL control " + fmt("%.1f", ctl[0]) + ", " + fmt("%.1f", ctl[1]) + ", " + fmt("%.1f", ctl[2]);
  return {pass, "transported/baseline " + s};
}

Outcome fourier_decay() {
  double worst = 0;
  for (const Rational& a : {Rational(1), Rational(1, 2), Rational(0)}) {
    for (int k : {1, 2}) {
      // second-order Laplacian: relative error ~ k^4 h^2 |a + i| t / 12
      Grid g;
      g.n = 512;
      g.L = 2 * M_PI;
      g.tau = 1e-4;
      const RDSystem sys(1, DiffusionMatrix(Expr(a)), {Expr(0), Expr(0)});
      const auto ic = sample_state(g, [&](const auto& x) { return cplx(std::cos(k * x[0]), 0); });
      const auto tr = integrate(sys, g, ic, 0.1, {1000});
      const cplx fac = std::exp(-cplx(a.get_d(), 1) * double(k * k) * 0.1);
      double err = 0, ref = 0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        err = std::max(err, std::abs(tr.states.back().w[j] - fac * ic.w[j]));
        ref = std::max(ref, std::abs(fac * ic.w[j]));
      }
      worst = std::max(worst, err / ref);
    }
  }
  return {worst < 1e-4, "max relative error " + fmt("%.2e", worst) + " at t = 0.1 (N = 512; a = 1, 1/2, 0; k = 1, 2)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"table verification", main_symmetries}, {"guard sharpness", guard_sharpness},
      {"oracle equivalence", oracle_agreement}, {"algebra classes", algebra_reproduction},
      {"lie closure", lie_closure},             {"AET suite", aet_suite},
      {"numeric transport", numeric_transport}, {"solver correctness", fourier_decay}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %zu %s [%s] %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.summary.c_str(), sec);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
