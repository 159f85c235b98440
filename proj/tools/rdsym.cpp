// rdsym: catalog, verification, algebra, equivalence and numeric commands.
// Exit codes: 0 pass, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "rdsym/algebra/realizations.hpp"
#include "rdsym/catalog/closure.hpp"
#include "rdsym/equivalence/claims.hpp"
#include "rdsym/numeric/transport.hpp"

using namespace rdsym;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Markdown };

Rational parse_rational(const std::string& s) {
  const Expr e = simplify(parse(s));
  if (!e.is_number()) throw UsageError("not a rational number: '" + s + "'");
  return e.number();
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : detail::split(s, ',')) {
    const int m = std::stoi(detail::trim(p));
    if (m < 1 || m > 3) throw UsageError("dimensions must be 1, 2 or 3");
    out.push_back(m);
  }
  return out;
}

ParamPoint parse_point(const std::string& s) {
  ParamPoint p;
  if (detail::trim(s).empty()) return p;
  for (const auto& part : detail::split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("expected name=value in '" + part + "'");
    p[detail::trim(part.substr(0, eq))] = parse_rational(part.substr(eq + 1));
  }
  return p;
}

std::string md_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += " ";
    else out += c;
  }
  return out;
}

void print_table(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows) {
  std::cout << "|";
  for (const auto& h : head) std::cout << " " << h << " |";
  std::cout << "\n|";
  for (std::size_t i = 0; i < head.size(); ++i) std::cout << "---|";
  std::cout << "\n";
  for (const auto& r : rows) {
    std::cout << "|";
    for (const auto& c : r) std::cout << " " << md_escape(c) << " |";
    std::cout << "\n";
  }
}

std::string render_guard(const Guard& g) {
  if (g.empty()) return "always";
  std::string out;
  for (const auto& c : g) out += (out.empty() ? "" : " | ") + render(c);
  return out;
}

// ---- entry selection ---------------------------------------------------------

struct Selection {
  std::string id;
  int table = 0, item = 0;
  bool all = false;

  void add(CLI::App* app, bool with_all) {
    app->add_option("--id", id, "entry id, e.g. T1.2");
    app->add_option("--table", table, "table number");
    app->add_option("--item", item, "item number");
    if (with_all) app->add_flag("--all", all, "every entry");
  }
  std::vector<const CatalogEntry*> resolve(const Catalog& cat) const {
    if (all) {
      std::vector<const CatalogEntry*> out;
      for (const auto& e : cat.entries) out.push_back(&e);
      return out;
    }
    if (!id.empty()) return {&cat.entry(id)};
    if (table > 0 && item > 0) return {&cat.entry(table, item)};
    throw UsageError("select an entry with --id, --table/--item" + std::string(all ? "" : " or --all"));
  }
};

// ---- catalog -------------------------------------------------------------------

json entry_json(const CatalogEntry& e) {
  json j{{"id", e.id}, {"table", e.table}, {"item", e.item}, {"f1", e.f1}, {"f2", e.f2}, {"main", e.main}};
  json params = json::object();
  for (const auto& [n, d] : e.params) params[n] = d == Domain::Real ? "real" : d == Domain::Sign ? "sign" : "kappa";
  j["params"] = params;
  if (!e.assign.empty()) j["assign"] = render(e.assign);
  if (!e.filter.empty()) j["filter"] = render(e.filter);
  json add = json::array();
  for (const auto& c : e.additional) {
    json a{{"name", c.name}, {"guard", render_guard(c.guard)}, {"generators", c.generators}};
    if (!c.table_guard.empty()) a["tabulated_guard"] = c.table_guard;
    if (c.gamma) a["gamma"] = *c.gamma;
    add.push_back(a);
  }
  j["additional"] = add;
  json aets = json::array();
  for (const auto& c : e.aets) aets.push_back({{"aet", aet_name(c)}, {"guard", render_guard(c.guard)}});
  j["aets"] = aets;
  return j;
}

int cmd_catalog_list(const Catalog& cat, Format fmt) {
  if (fmt == Format::Json) {
    for (const auto& e : cat.entries) {
      std::cout << json{{"id", e.id}, {"table", e.table}, {"item", e.item}, {"f1", e.f1}, {"f2", e.f2}}.dump() << "\n";
    }
    return 0;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : cat.entries) {
    rows.push_back({e.id, std::to_string(e.table), std::to_string(e.item), e.f1, e.f2});
  }
  print_table({"id", "table", "item", "f1", "f2"}, rows);
  return 0;
}

int cmd_catalog_show(const Catalog& cat, const Selection& sel, Format fmt) {
  const CatalogEntry& e = *sel.resolve(cat).front();
  if (fmt == Format::Json) {
    std::cout << entry_json(e).dump(2) << "\n";
    return 0;
  }
  std::cout << "## " << e.id << " (table " << e.table << ", item " << e.item << ")\n\n";
  std::cout << "- f1 = " << e.f1 << "\n";
  std::cout << "- f2 = " << e.f2 << "\n";
  if (!e.assign.empty()) std::cout << "- with " << render(e.assign) << "\n";
  if (!e.filter.empty()) std::cout << "- where " << render(e.filter) << "\n";
  std::cout << "- main symmetries: ";
  for (std::size_t i = 0; i < e.main.size(); ++i) std::cout << (i ? ", " : "") << e.main[i];
  std::cout << "\n\n";
  if (!e.additional.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : e.additional) {
      std::string gens;
      for (const auto& g : c.generators) gens += (gens.empty() ? "" : ", ") + g;
      rows.push_back({c.name, render_guard(c.guard), gens});
    }
    print_table({"additional", "guard", "generators"}, rows);
    std::cout << "\n";
  }
  if (!e.aets.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : e.aets) rows.push_back({aet_name(c), render_guard(c.guard)});
    print_table({"AET", "guard"}, rows);
  }
  return 0;
}

// ---- verify --------------------------------------------------------------------

struct VerifyArgs {
  Selection sel;
  std::string dims = "1,2,3";
  int samples = 5;
  std::uint64_t seed = 7;
  bool aet = false, views = false, no_guards = false, no_perturb = false;
  std::string report;
  int jobs = 0;
};

int finish_reports(const std::vector<EntryReport>& reps, const std::string& report, Format fmt) {
  bool ok = true;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reps) {
    std::size_t failed = 0;
    for (const auto& c : r.records) failed += !c.passed;
    ok = ok && failed == 0;
    if (fmt == Format::Json) {
      std::cout << json{{"entry", r.id}, {"checks", r.records.size()}, {"failed", failed}, {"passed", failed == 0}}.dump()
                << "\n";
    } else {
      rows.push_back({r.id, std::to_string(r.records.size()), std::to_string(failed), failed ? "FAIL" : "ok"});
    }
  }
  if (fmt == Format::Markdown) print_table({"entry", "checks", "failed", "result"}, rows);
  std::string path = report;
  if (path.empty() && !ok) path = "rdsym-report.jsonl";
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report '" + path + "'");
    for (const auto& r : reps) {
      for (const auto& c : r.records) out << to_json(c).dump() << "\n";
    }
  }
  if (!ok) std::cerr << "verification failed; report: " << path << "\n";
  return ok ? 0 : 1;
}

int cmd_verify(const Catalog& cat, const VerifyArgs& a, Format fmt) {
  VerifyOptions opt;
  opt.dims = parse_dims(a.dims);
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.guards = !a.no_guards;
  opt.perturb = !a.no_perturb;
  if (opt.samples < 1) throw UsageError("--samples must be positive");
  std::vector<std::function<EntryReport()>> tasks;
  for (const CatalogEntry* e : a.sel.resolve(cat)) {
    tasks.push_back([&cat, e, opt] { return verify_entry(cat, *e, opt); });
    if (a.aet && !e->aets.empty()) {
      tasks.push_back([&cat, e, opt] {
        EntryReport r = verify_aet_claims(cat, *e, opt);
        r.id += " AET";
        return r;
      });
    }
  }
  if (a.views || a.sel.all) {
    for (const auto* list : {&cat.views, &cat.families}) {
      for (const auto& v : *list) tasks.push_back([&cat, &v, opt] { return verify_view(cat, v, opt); });
    }
  }
  // results are collected in task order, so the output does not depend on scheduling
  const unsigned jobs = a.jobs > 0 ? static_cast<unsigned>(a.jobs) : std::max(1u, std::thread::hardware_concurrency());
  std::vector<EntryReport> reps(tasks.size());
  for (std::size_t start = 0; start < tasks.size(); start += jobs) {
    std::vector<std::future<EntryReport>> running;
    for (std::size_t i = start; i < std::min(tasks.size(), start + jobs); ++i) {
      running.push_back(std::async(std::launch::async, tasks[i]));
    }
    for (std::size_t i = 0; i < running.size(); ++i) reps[start + i] = running[i].get();
  }
  return finish_reports(reps, a.report, fmt);
}

// ---- algebra -------------------------------------------------------------------

json tail_json(const TailMatrix& t) {
  return {{"c", t.c().get_str()}, {"d", t.d().get_str()}, {"b1", t.b1().get_str()}, {"b2", t.b2().get_str()}};
}

json conj_json(const ConjugatorU& u) {
  return {{"b1", u.b1.get_str()}, {"b2", u.b2.get_str()}, {"K1", u.K1.get_str()}, {"K2", u.K2.get_str()}};
}

int cmd_canonicalize(const std::string& tail, Format fmt) {
  const auto parts = detail::split(tail, ',');
  if (parts.size() != 4) throw UsageError("--tail expects c,d,b1,b2");
  const TailMatrix g = TailMatrix::from(parse_rational(parts[2]), parse_rational(parts[3]), parse_rational(parts[0]),
                                        parse_rational(parts[1]));
  const CanonicalTail ct = canonicalize_tail(g);
  const bool verified = ct.U.conjugate(g) == ct.scale * ct.matrix();
  if (fmt == Format::Json) {
    std::cout << json{{"input", tail_json(g)},         {"form", ct.name()},
                      {"scale", ct.scale.get_str()},   {"conjugator", conj_json(ct.U)},
                      {"canonical", tail_json(ct.matrix())}, {"verified", verified}}
                     .dump()
              << "\n";
  } else {
    std::cout << "form: " << ct.name() << " scaled by " << ct.scale.get_str() << "\n";
    std::cout << "conjugator: b = (" << ct.U.b1.get_str() << ", " << ct.U.b2.get_str() << "), K = (" << ct.U.K1.get_str()
              << ", " << ct.U.K2.get_str() << ")\n";
    std::cout << "verified: " << (verified ? "yes" : "no") << "\n";
  }
  return verified ? 0 : 1;
}

int cmd_enumerate(int dim, std::size_t budget, Format fmt) {
  EnumerationOptions opt;
  opt.budget = budget;
  const Enumeration en = enumerate_algebras(dim, opt);
  if (fmt == Format::Json) {
    for (const auto& f : en.classes) {
      json basis = json::array();
      for (const auto& b : f.cls.basis) basis.push_back(tail_json(b));
      json alphas = json::array();
      for (const auto& a : f.alphas) alphas.push_back(a.get_str());
      std::cout << json{{"dim", dim}, {"class", f.cls.name}, {"basis_names", f.cls.basis_names}, {"basis", basis},
                        {"alpha_family", f.cls.alpha.has_value()}, {"alphas_seen", alphas}, {"subalgebras", f.found}}
                       .dump()
                << "\n";
    }
    return 0;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : en.classes) {
    std::string names;
    for (const auto& n : f.cls.basis_names) names += (names.empty() ? "" : ", ") + n;
    rows.push_back({f.cls.name, "<" + names + ">", f.cls.alpha ? "alpha" : "", std::to_string(f.found)});
  }
  print_table({"class", "basis", "parameter", "subalgebras found"}, rows);
  std::cout << "\n" << en.classes.size() << " classes of dimension " << dim << "\n";
  return 0;
}

int print_closure(const ClosureResult& r, const std::string& what, Format fmt) {
  if (fmt == Format::Json) {
    json basis = json::array();
    for (const auto& b : r.basis) basis.push_back(b.label);
    json j{{"subject", what}, {"closed", r.closed}, {"basis", basis}};
    if (r.closed) {
      j["brackets"] = r.table();
    } else {
      j["witness"] = r.basis[r.witness_pair.first].label + ", " + r.basis[r.witness_pair.second].label;
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << what << "\n";
    if (r.closed) {
      std::cout << r.table();
    } else {
      std::cout << "not closed: [" << r.basis[r.witness_pair.first].label << ", "
                << r.basis[r.witness_pair.second].label << "] leaves the span\n";
    }
  }
  return r.closed ? 0 : 1;
}

struct ClosureArgs {
  Selection sel;
  std::string realization;
  int m = 1;
  std::uint64_t seed = 7;
  std::string mu = "1/2", nu = "-2/3", alpha = "1/3";
  bool tilde = false;
};

int cmd_closure(const Catalog& cat, const ClosureArgs& a, Format fmt) {
  if (!a.realization.empty()) {
    RealizationParams rp;
    rp.mu = parse_rational(a.mu);
    rp.nu = parse_rational(a.nu);
    rp.alpha = parse_rational(a.alpha);
    rp.tilde_g4 = a.tilde;
    int rc = 0;
    bool found = false;
    for (const auto& r : realizations(a.m, rp)) {
      if (r.name != a.realization && a.realization != "all") continue;
      found = true;
      rc = std::max(rc, print_closure(closure_check(r.basis), r.name + " over " + r.algebra, fmt));
    }
    if (!found) throw UsageError("unknown realization '" + a.realization + "'");
    return rc;
  }
  std::mt19937_64 rng(a.seed);
  int rc = 0;
  for (const CatalogEntry* e : a.sel.resolve(cat)) {
    const EntryClosure c = entry_closure(cat, *e, a.m, rng);
    rc = std::max(rc, print_closure(c.result, e->id + " m=" + std::to_string(a.m) + " at " + c.point, fmt));
  }
  return rc;
}

// ---- equivalence ---------------------------------------------------------------

struct EquivArgs {
  Selection sel;
  std::string set, aet, linear, omega = "1";
  int m = 1;
  std::string dims = "1,2";
  int samples = 3;
  std::uint64_t seed = 7;
  std::string report;
};

int cmd_equiv_apply(const Catalog& cat, const EquivArgs& a, Format fmt) {
  const CatalogEntry& e = *a.sel.resolve(cat).front();
  const Instance in = instantiate(cat, e, parse_point(a.set), a.m);
  EquivTransform T;
  if (!a.aet.empty()) {
    std::vector<AetStep> steps;
    for (const auto& part : detail::split(a.aet, ',')) {
      AetStep s;
      s.id = std::stoi(detail::trim(part));
      s.omega = Expr(parse_rational(a.omega));
      for (const auto& c : e.aets) {
        if (c.ids.size() == 1 && c.ids[0] == s.id) {
          for (const auto& [k, v] : c.bind) {
            const Expr val(value_at(v, in.ctx, in.point));
            if (k == "nu") s.nu = val;
            else if (k == "sigma") s.sigma = val;
            else if (k == "lambda") s.lambda = val;
          }
        }
      }
      steps.push_back(s);
    }
    T = EquivTransform::aet(steps);
  } else if (!a.linear.empty()) {
    const auto p = detail::split(a.linear, ',');
    if (p.size() != 5) throw UsageError("--linear expects K1,K2,lambda,b1,b2");
    T = EquivTransform::linear(parse_rational(p[0]), parse_rational(p[1]), parse_rational(p[2]),
                               {parse_rational(p[3]), parse_rational(p[4])});
  } else {
    throw UsageError("give --aet or --linear");
  }
  T.validate(a.m);
  try {
    const RDSystem out = apply(T, in.sys);
    if (fmt == Format::Json) {
      std::cout << json{{"entry", e.id}, {"a", render(out.A.a())}, {"f1", render(out.f[0])}, {"f2", render(out.f[1])},
                        {"form_preserved", true}}
                       .dump()
                << "\n";
    } else {
      std::cout << "a  = " << render(out.A.a()) << "\nf1 = " << render(out.f[0]) << "\nf2 = " << render(out.f[1]) << "\n";
    }
    return 0;
  } catch (const FormNotPreserved& ex) {
    if (fmt == Format::Json) {
      std::cout << json{{"entry", e.id}, {"form_preserved", false}, {"detail", ex.what()}}.dump() << "\n";
    } else {
      std::cout << ex.what() << "\n";
    }
    return 1;
  }
}

int cmd_equiv_verify(const Catalog& cat, const EquivArgs& a, Format fmt) {
  VerifyOptions opt;
  opt.dims = parse_dims(a.dims);
  opt.samples = a.samples;
  opt.seed = a.seed;
  std::vector<EntryReport> reps;
  for (const CatalogEntry* e : a.sel.resolve(cat)) {
    if (!e->aets.empty()) reps.push_back(verify_aet_claims(cat, *e, opt));
  }
  return finish_reports(reps, a.report, fmt);
}

// ---- simulate and oracle -------------------------------------------------------

struct SystemArgs {
  std::string a = "0", f1 = "0", f2 = "0", id, set;
  int m = 1;

  RDSystem build(const Catalog& cat) const {
    if (!id.empty()) return instantiate(cat, cat.entry(id), parse_point(set), m).sys;
    ParseContext ctx = with_space_macros(ParseContext(), m);
    return RDSystem(m, DiffusionMatrix(Expr(parse_rational(a))), {simplify(parse(f1, ctx)), simplify(parse(f2, ctx))});
  }
};

struct SimArgs {
  SystemArgs sys;
  int n = 256;
  double L = 2 * M_PI, tau = 1e-3, T = 1;
  std::string ic_u = "cos(x1)", ic_v = "0";
  std::string transport;
  double theta = 0.1;
  std::string out;
};

int cmd_simulate(const Catalog& cat, const SimArgs& a, Format fmt) {
  const RDSystem sys = a.sys.build(cat);
  Grid g;
  g.m = sys.m;
  g.n = a.n;
  g.L = a.L;
  g.tau = a.tau;
  const ParseContext ctx = with_space_macros(ParseContext(), sys.m);
  const CompiledExpr iu(simplify(parse(a.ic_u, ctx))), iv(simplify(parse(a.ic_v, ctx)));
  const FieldState ic = sample_state(g, [&](const std::array<double, 3>& x) {
    PointArgs p;
    p.x = x;
    return cplx(iu(p), iv(p));
  });
  json j{{"n", g.n}, {"L", g.L}, {"tau", g.tau}, {"T", a.T}};
  try {
    if (!a.transport.empty()) {
      const Generator X = parse_generator(a.transport, ctx, OperatorContext{sys.m, sys.A, Expr(0)});
      const TransportResult r = symmetry_transport_residual(sys, X, a.theta, g, ic, a.T);
      j.update({{"generator", a.transport}, {"theta", a.theta}, {"flow", r.method}, {"baseline_residual", r.baseline},
                {"transported_residual", r.transported}, {"interpolation_error", r.interp_error}});
    } else {
      const Trajectory tr = integrate(sys, g, ic, a.T);
      j.update({{"t", tr.states.back().t}, {"max_abs", tr.states.back().max_abs()}});
      if (!a.out.empty()) {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
        out.precision(17);
        out << "index,u,v\n";
        const auto& w = tr.states.back().w;
        for (std::size_t k = 0; k < w.size(); ++k) out << k << "," << w[k].real() << "," << w[k].imag() << "\n";
      }
    }
  } catch (const DivergenceError& ex) {
    j["diverged_at"] = ex.time();
    std::cout << j.dump() << "\n";
    return 1;
  }
  if (fmt == Format::Json) {
    std::cout << j.dump() << "\n";
  } else {
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ": " << it.value().dump() << "\n";
  }
  return 0;
}

int cmd_oracle(const Catalog& cat, const SystemArgs& s, const std::string& gen, Format fmt) {
  const RDSystem sys = s.build(cat);
  const ParseContext ctx = with_space_macros(ParseContext(), sys.m);
  const Generator X = parse_generator(gen, ctx, OperatorContext{sys.m, sys.A, Expr(0)});
  const Vec2 res = invariance_residual(sys, X);
  const PairVerdict v = verdict(res);
  const PairVerdict c = verdict(classifying_general(sys, X));
  const bool ok = v.zero();
  if (fmt == Format::Json) {
    std::cout << json{{"residual1", render(res[0])},
                      {"residual2", render(res[1])},
                      {"oracle", {to_string(v.component[0].kind), to_string(v.component[1].kind)}},
                      {"classifying", {to_string(c.component[0].kind), to_string(c.component[1].kind)}},
                      {"symmetry", ok}}
                     .dump()
              << "\n";
  } else {
    std::cout << "residual 1: " << render(res[0]) << "\nresidual 2: " << render(res[1]) << "\n";
    std::cout << "oracle: " << to_string(v.component[0].kind) << ", " << to_string(v.component[1].kind) << "\n";
    std::cout << "classifying: " << to_string(c.component[0].kind) << ", " << to_string(c.component[1].kind) << "\n";
    std::cout << (ok ? "symmetry" : "not a symmetry") << "\n";
  }
  return ok ? 0 : 1;
}

void add_system(CLI::App* app, SystemArgs& s) {
  app->add_option("--a", s.a, "diffusion parameter a");
  app->add_option("--f1", s.f1, "first source term in u, v, R, z");
  app->add_option("--f2", s.f2, "second source term");
  app->add_option("--system", s.id, "take the system from a catalog entry instead");
  app->add_option("--set", s.set, "parameter values for --system, e.g. a=1,nu=2");
  app->add_option("--m", s.m, "spatial dimension")->check(CLI::Range(1, 3));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry classification of generalized CGL reaction-diffusion systems"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  std::string format = "markdown", catalog_path = default_catalog_path();
  app.add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));
  app.add_option("--catalog", catalog_path, "catalog file");

  auto* catalog = app.add_subcommand("catalog", "list or show catalog entries");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list entries");
  auto* show = catalog->add_subcommand("show", "show one entry");
  Selection show_sel;
  show_sel.add(show, false);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "verify catalog entries");
  va.sel.add(verify, true);
  verify->add_option("--m", va.dims, "comma separated dimensions");
  verify->add_option("--samples", va.samples, "parameter draws per dimension");
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_flag("--aet", va.aet, "also verify the AET claims");
  verify->add_flag("--views", va.views, "also verify the named views and families");
  verify->add_flag("--no-guards", va.no_guards, "skip guard sharpness");
  verify->add_flag("--no-perturb", va.no_perturb, "skip perturbation witnesses");
  verify->add_option("--report", va.report, "write all check records as JSON lines");
  verify->add_option("--jobs", va.jobs, "parallel entries (default: hardware threads)");

  auto* algebra = app.add_subcommand("algebra", "tail algebras");
  algebra->require_subcommand(1);
  std::string tail;
  auto* canon = algebra->add_subcommand("canonicalize", "canonical form of a tail");
  canon->add_option("--tail", tail, "c,d,b1,b2 with C = cI + dJ, B = (b1, b2)")->required();
  int dim = 2;
  std::size_t budget = EnumerationOptions{}.budget;
  auto* enumerate = algebra->add_subcommand("enumerate", "classes of tail subalgebras");
  enumerate->add_option("--dim", dim, "dimension 2, 3 or 4")->check(CLI::Range(2, 4));
  enumerate->add_option("--budget", budget, "maximum number of closures");
  ClosureArgs ca;
  auto* closure = algebra->add_subcommand("closure", "closure of the listed symmetries or a realization");
  ca.sel.add(closure, true);
  closure->add_option("--realization", ca.realization, "realization name, e.g. \"A_{2,3} #1\", or all");
  closure->add_option("--m", ca.m, "spatial dimension")->check(CLI::Range(1, 3));
  closure->add_option("--seed", ca.seed, "random seed");
  closure->add_option("--mu", ca.mu, "realization parameter mu");
  closure->add_option("--nu", ca.nu, "realization parameter nu");
  closure->add_option("--alpha", ca.alpha, "g3 parameter");
  closure->add_flag("--tilde", ca.tilde, "conjugated g4 in the four-dimensional realizations");

  EquivArgs ea;
  auto* equiv = app.add_subcommand("equiv", "equivalence transformations");
  equiv->require_subcommand(1);
  auto* eapply = equiv->add_subcommand("apply", "apply a transformation to an entry");
  ea.sel.add(eapply, false);
  eapply->add_option("--set", ea.set, "parameter values, e.g. a=1,nu=2");
  eapply->add_option("--m", ea.m, "spatial dimension")->check(CLI::Range(1, 3));
  eapply->add_option("--aet", ea.aet, "comma separated AET ids, applied left to right");
  eapply->add_option("--omega", ea.omega, "AET parameter omega");
  eapply->add_option("--linear", ea.linear, "K1,K2,lambda,b1,b2");
  auto* everify = equiv->add_subcommand("verify", "verify the AET claims");
  ea.sel.add(everify, true);
  everify->add_option("--m", ea.dims, "comma separated dimensions");
  everify->add_option("--samples", ea.samples, "parameter draws per dimension");
  everify->add_option("--seed", ea.seed, "random seed");
  everify->add_option("--report", ea.report, "write all check records as JSON lines");

  SimArgs sa;
  auto* simulate = app.add_subcommand("simulate", "integrate a system on a periodic grid");
  add_system(simulate, sa.sys);
  simulate->add_option("--n", sa.n, "points per axis");
  simulate->add_option("--L", sa.L, "domain length");
  simulate->add_option("--tau", sa.tau, "time step");
  simulate->add_option("--T", sa.T, "final time");
  simulate->add_option("--ic-u", sa.ic_u, "initial u as an expression in x1, x2");
  simulate->add_option("--ic-v", sa.ic_v, "initial v");
  simulate->add_option("--transport", sa.transport, "generator to transport the solution along, e.g. G1");
  simulate->add_option("--theta", sa.theta, "group parameter for --transport");
  simulate->add_option("--out", sa.out, "write the final state as CSV");

  SystemArgs oa;
  std::string gen;
  auto* oracle = app.add_subcommand("oracle", "invariance residual of a generator");
  add_system(oracle, oa);
  oracle->add_option("--gen", gen, "generator, e.g. \"2*D - DR\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Format fmt = format == "json" ? Format::Json : Format::Markdown;
  try {
    const Catalog cat = load_catalog(catalog_path);
    if (list->parsed()) return cmd_catalog_list(cat, fmt);
    if (show->parsed()) return cmd_catalog_show(cat, show_sel, fmt);
    if (verify->parsed()) return cmd_verify(cat, va, fmt);
    if (canon->parsed()) return cmd_canonicalize(tail, fmt);
    if (enumerate->parsed()) return cmd_enumerate(dim, budget, fmt);
    if (closure->parsed()) return cmd_closure(cat, ca, fmt);
    if (eapply->parsed()) return cmd_equiv_apply(cat, ea, fmt);
    if (everify->parsed()) return cmd_equiv_verify(cat, ea, fmt);
    if (simulate->parsed()) return cmd_simulate(cat, sa, fmt);
    if (oracle->parsed()) return cmd_oracle(cat, oa, gen, fmt);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
