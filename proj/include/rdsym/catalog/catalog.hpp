#pragma once

// Machine-readable classification tables: entries, guards, sampling of
// admissible parameter points and instantiation into concrete systems.

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsym/symmetry/operators.hpp"

namespace rdsym {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Domain { Real, Sign, Kappa };

inline Domain domain_from_string(const std::string& s) {
  if (s == "real") return Domain::Real;
  if (s == "sign") return Domain::Sign;
  if (s == "kappa") return Domain::Kappa;
  throw CatalogError("unknown parameter domain '" + s + "'");
}

using ParamPoint = std::map<std::string, Rational>;

/// `lhs = rhs` or `lhs != rhs`. An equality whose left side is a bare parameter
/// doubles as an assignment when sampling.
struct Atom {
  std::string src;
  std::string lhs_src, rhs_src;
  bool equal = true;
};

using Conjunction = std::vector<Atom>;
using Guard = std::vector<Conjunction>;  // disjunction of conjunctions

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace detail

inline Atom parse_atom(const std::string& s) {
  Atom a;
  a.src = detail::trim(s);
  auto ne = a.src.find("!=");
  if (ne != std::string::npos) {
    a.equal = false;
    a.lhs_src = detail::trim(a.src.substr(0, ne));
    a.rhs_src = detail::trim(a.src.substr(ne + 2));
  } else {
    auto eq = a.src.find('=');
    if (eq == std::string::npos) throw CatalogError("guard atom without '=' or '!=': " + a.src);
    a.lhs_src = detail::trim(a.src.substr(0, eq));
    a.rhs_src = detail::trim(a.src.substr(eq + 1));
  }
  if (a.lhs_src.empty() || a.rhs_src.empty()) throw CatalogError("malformed guard atom: " + a.src);
  return a;
}

inline Conjunction parse_conjunction(const std::string& s) {
  Conjunction c;
  if (detail::trim(s).empty()) return c;
  for (const auto& part : detail::split(s, '&')) c.push_back(parse_atom(part));
  return c;
}

inline Guard parse_guard(const std::string& s) {
  Guard g;
  if (detail::trim(s).empty()) return g;
  for (const auto& part : detail::split(s, '|')) g.push_back(parse_conjunction(part));
  return g;
}

inline std::string render(const Conjunction& c) {
  std::string out;
  for (const auto& a : c) out += (out.empty() ? "" : " & ") + a.src;
  return out.empty() ? "true" : out;
}

/// A conditional symmetry claim: `guard` is the tabulated condition, `solved`
/// an equivalent conjunction in solved form used to sample points where it holds.
struct ClaimSpec {
  std::string name;  // G, Ghat, K
  Guard guard;
  std::string table_guard;  // as tabulated, when it differs from the verified guard
  Conjunction solved;
  std::optional<std::string> gamma;
  std::vector<std::string> generators;
};

/// AET claim; `ids` composes left to right.
struct AetClaimSpec {
  std::vector<int> ids;
  std::map<std::string, std::string> bind;
  Guard guard;
  Conjunction solved;
};

struct CatalogEntry {
  std::string id;
  int table = 0, item = 0;
  std::vector<std::pair<std::string, Domain>> params;  // excludes the diffusion parameter a
  std::map<std::string, std::string> arguments;
  std::vector<std::pair<std::string, std::string>> derived;
  Conjunction assign, filter;
  std::string f1, f2;
  std::vector<std::string> main;
  std::vector<std::string> families;  // tails spanning infinite families (Du, Dv)
  std::vector<ClaimSpec> additional;
  std::vector<AetClaimSpec> aets;
  std::pair<std::string, std::string> perturb{"u^2*v", "0"};
  std::string notes;

  std::optional<Domain> domain(const std::string& p) const {
    if (p == "a") return Domain::Real;
    for (const auto& [n, d] : params) {
      if (n == p) return d;
    }
    return std::nullopt;
  }
  std::vector<std::string> free_params() const {
    std::vector<std::string> out{"a"};
    for (const auto& [n, d] : params) out.push_back(n);
    return out;
  }
  /// every symbol a formula of this entry may reference
  std::set<std::string> all_params() const {
    std::set<std::string> out{"a"};
    for (const auto& [n, d] : params) out.insert(n);
    for (const auto& at : assign) out.insert(at.lhs_src);
    return out;
  }
};

struct CatalogView {
  std::string name, entry;
  Conjunction assign, filter;
  std::map<std::string, bool> expect;
};

struct Catalog {
  std::vector<CatalogEntry> entries;
  std::vector<CatalogView> views;
  std::vector<CatalogView> families;
  std::map<std::string, std::pair<std::string, std::string>> fchoices;

  const CatalogEntry& entry(const std::string& id) const {
    for (const auto& e : entries) {
      if (e.id == id) return e;
    }
    throw CatalogError("no catalog entry '" + id + "'");
  }
  const CatalogEntry& entry(int table, int item) const {
    for (const auto& e : entries) {
      if (e.table == table && e.item == item) return e;
    }
    throw CatalogError("no catalog entry for table " + std::to_string(table) + " item " + std::to_string(item));
  }
  std::vector<std::string> fchoice_names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : fchoices) out.push_back(k);
    return out;
  }
};

// ---- loading -----------------------------------------------------------------

namespace detail {

inline ParseContext entry_context(const CatalogEntry& e, int m) {
  ParseContext ctx;
  for (const auto& p : e.all_params()) ctx.params.insert(p);
  ctx = with_space_macros(std::move(ctx), m);
  for (const auto& [name, src] : e.derived) ctx.macros[name] = parse(src, ctx);
  return ctx;
}

inline CatalogView view_from_json(const nlohmann::json& j) {
  CatalogView v;
  v.name = j.at("name").get<std::string>();
  v.entry = j.at("entry").get<std::string>();
  v.assign = parse_conjunction(j.value("assign", ""));
  v.filter = parse_conjunction(j.value("filter", ""));
  if (j.contains("expect")) {
    for (const auto& [k, val] : j.at("expect").items()) v.expect[k] = val.get<bool>();
  }
  return v;
}

inline void validate_entry(const CatalogEntry& e) {
  const std::string where = "entry " + e.id + ": ";
  try {
    for (int m = 1; m <= 3; ++m) {
      ParseContext ctx = entry_context(e, m);
      ctx.macros["gamma"] = param("gamma");
      RDSystem(m, DiffusionMatrix(param("a")), {parse(e.f1, ctx), parse(e.f2, ctx)});
      auto check = [&](const Conjunction& c) {
        for (const auto& a : c) {
          parse(a.lhs_src, ctx);
          parse(a.rhs_src, ctx);
        }
      };
      check(e.assign);
      check(e.filter);
      OperatorContext oc{m, DiffusionMatrix(param("a")), param("gamma")};
      for (const auto& g : e.main) parse_generator(g, ctx, oc);
      for (const auto& c : e.additional) {
        for (const auto& conj : c.guard) check(conj);
        check(c.solved);
        if (c.gamma) parse(*c.gamma, ctx);
      }
      for (const auto& a : e.aets) {
        for (const auto& conj : a.guard) check(conj);
        check(a.solved);
        for (int id : a.ids) {
          if (id < 1 || id > 8) throw CatalogError(where + "AET id " + std::to_string(id) + " does not exist");
        }
      }
    }
  } catch (const SymbolicError& ex) {
    throw CatalogError(where + ex.what());
  }
  if (e.main.empty()) throw CatalogError(where + "no main symmetries");
}

}  // namespace detail

inline CatalogEntry entry_from_json(const nlohmann::json& j) {
  CatalogEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.table = j.at("table").get<int>();
    e.item = j.at("item").get<int>();
    for (const auto& [k, v] : j.at("params").items()) e.params.emplace_back(k, domain_from_string(v.get<std::string>()));
    if (j.contains("arguments")) e.arguments = j.at("arguments").get<std::map<std::string, std::string>>();
    if (j.contains("derived")) {
      for (const auto& [k, v] : j.at("derived").items()) e.derived.emplace_back(k, v.get<std::string>());
    }
    e.assign = parse_conjunction(j.value("assign", ""));
    e.filter = parse_conjunction(j.value("filter", ""));
    e.f1 = j.at("f1").get<std::string>();
    e.f2 = j.at("f2").get<std::string>();
    e.main = j.at("main").get<std::vector<std::string>>();
    if (j.contains("families")) e.families = j.at("families").get<std::vector<std::string>>();
    if (j.contains("additional")) {
      for (const auto& c : j.at("additional")) {
        ClaimSpec s;
        s.name = c.at("name").get<std::string>();
        s.guard = parse_guard(c.at("guard").get<std::string>());
        s.table_guard = c.value("table_guard", "");
        s.solved = parse_conjunction(c.value("solved", c.at("guard").get<std::string>()));
        if (c.contains("gamma")) s.gamma = c.at("gamma").get<std::string>();
        s.generators = c.at("generators").get<std::vector<std::string>>();
        e.additional.push_back(std::move(s));
      }
    }
    if (j.contains("aets")) {
      for (const auto& c : j.at("aets")) {
        AetClaimSpec s;
        s.ids = c.at("ids").get<std::vector<int>>();
        if (c.contains("bind")) s.bind = c.at("bind").get<std::map<std::string, std::string>>();
        s.guard = parse_guard(c.value("guard", ""));
        s.solved = parse_conjunction(c.value("solved", c.value("guard", "")));
        e.aets.push_back(std::move(s));
      }
    }
    if (j.contains("perturb")) {
      e.perturb = {j.at("perturb").at("f1").get<std::string>(), j.at("perturb").at("f2").get<std::string>()};
    }
    e.notes = j.value("notes", "");
  } catch (const nlohmann::json::exception& ex) {
    throw CatalogError("entry " + (e.id.empty() ? std::string("?") : e.id) + ": " + ex.what());
  }
  detail::validate_entry(e);
  return e;
}

inline Catalog catalog_from_json(const nlohmann::json& j) {
  Catalog c;
  for (const auto& e : j.at("entries")) c.entries.push_back(entry_from_json(e));
  for (const auto& v : j.value("views", nlohmann::json::array())) c.views.push_back(detail::view_from_json(v));
  for (const auto& v : j.value("families", nlohmann::json::array())) c.families.push_back(detail::view_from_json(v));
  for (const auto& [k, v] : j.at("fchoices").items()) {
    c.fchoices[k] = {v.at("F1").get<std::string>(), v.at("F2").get<std::string>()};
  }
  std::set<std::string> ids;
  for (const auto& e : c.entries) {
    if (!ids.insert(e.id).second) throw CatalogError("duplicate entry id " + e.id);
  }
  for (const auto& v : c.views) c.entry(v.entry);
  for (const auto& v : c.families) c.entry(v.entry);
  return c;
}

inline std::string default_catalog_path() {
#ifdef RDSYM_DATA_DIR
  return std::string(RDSYM_DATA_DIR) + "/catalog.json";
#else
  return "data/catalog.json";
#endif
}

inline Catalog load_catalog(const std::string& path = default_catalog_path()) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw CatalogError(path + ": " + ex.what());
  }
  return catalog_from_json(j);
}

// ---- parameter points --------------------------------------------------------

inline Substitution point_substitution(const ParamPoint& p) {
  Substitution s;
  for (const auto& [k, v] : p) s.bind(Symbol::param(k), Expr(v));
  return s;
}

/// Exact value of a parameter expression at a point.
inline Rational value_at(const std::string& src, const ParseContext& ctx, const ParamPoint& p) {
  const Expr e = simplify(subst(parse(src, ctx), point_substitution(p)));
  if (e.kind() == NodeKind::Number) return e.number();
  if (auto q = constant_value(e)) return *q;
  throw CatalogError("'" + src + "' is not a rational constant at the sampled point");
}

inline bool holds(const Atom& a, const ParseContext& ctx, const ParamPoint& p) {
  const Rational d = value_at("(" + a.lhs_src + ") - (" + a.rhs_src + ")", ctx, p);
  return a.equal ? d == 0 : d != 0;
}

inline bool holds(const Conjunction& c, const ParseContext& ctx, const ParamPoint& p) {
  for (const auto& a : c) {
    if (!holds(a, ctx, p)) return false;
  }
  return true;
}

inline bool holds(const Guard& g, const ParseContext& ctx, const ParamPoint& p) {
  if (g.empty()) return true;
  for (const auto& c : g) {
    if (holds(c, ctx, p)) return true;
  }
  return false;
}

inline std::string render_point(const ParamPoint& p) {
  std::string out;
  for (const auto& [k, v] : p) out += (out.empty() ? "" : ", ") + k + "=" + v.get_str();
  return out;
}

namespace detail {

inline bool in_domain(Domain d, const Rational& q) {
  switch (d) {
    case Domain::Real:
      return true;
    case Domain::Sign:
      return q == 1 || q == -1;
    case Domain::Kappa:
      return q == 0 || q == 1 || q == -1;
  }
  return false;
}

inline Rational draw(Domain d, std::mt19937_64& rng) {
  switch (d) {
    case Domain::Sign:
      return std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
    case Domain::Kappa:
      return std::uniform_int_distribution<int>(-1, 1)(rng);
    case Domain::Real:
      break;
  }
  std::uniform_int_distribution<int> num(1, 9), den(1, 4), sgn(0, 1);
  Rational q(num(rng) * (sgn(rng) ? 1 : -1), den(rng));
  q.canonicalize();
  return q;
}

inline bool is_linear(const Vec2& f) {
  for (const auto& fb : f) {
    for (const Symbol& a : {Symbol::jet(1), Symbol::jet(2)}) {
      for (const Symbol& b : {Symbol::jet(1), Symbol::jet(2)}) {
        if (!is_zero(diff(diff(fb, a), b), 8).zero()) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Draws a point of `e` in dimension m at which `extra` holds. Equalities with a
/// bare parameter on the left are assignments applied in order, before the
/// entry's own assignments; everything is re-checked at the end. Samples with a
/// linear source are rejected.
inline std::optional<ParamPoint> draw_point(const CatalogEntry& e, int m, const Conjunction& extra,
                                            std::mt19937_64& rng, int max_tries = 400) {
  const ParseContext ctx = detail::entry_context(e, m);
  auto assign = [&](const Atom& a, ParamPoint& p) {
    if (!a.equal || !ctx.params.contains(a.lhs_src)) return;
    p[a.lhs_src] = value_at(a.rhs_src, ctx, p);
  };
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    ParamPoint p;
    for (const auto& name : e.free_params()) p[name] = detail::draw(*e.domain(name), rng);
    for (const auto& a : e.assign) p[a.lhs_src] = Rational(0);
    try {
      for (const auto& a : extra) assign(a, p);
      for (const auto& a : e.assign) assign(a, p);
      if (!holds(extra, ctx, p) || !holds(e.filter, ctx, p)) continue;
    } catch (const std::exception&) {
      continue;  // e.g. division by zero in a solved form
    }
    bool ok = true;
    for (const auto& name : e.free_params()) ok = ok && detail::in_domain(*e.domain(name), p[name]);
    if (!ok) continue;
    const Substitution s = point_substitution(p);
    const Vec2 f{subst(parse(e.f1, ctx), s), subst(parse(e.f2, ctx), s)};
    if (detail::is_linear(f)) continue;
    return p;
  }
  return std::nullopt;
}

/// Negates atom k of a solved conjunction, keeping the others. Returns nothing
/// when the negation cannot be put in solved form.
inline std::optional<Conjunction> violate(const Conjunction& c, std::size_t k, const CatalogEntry& e,
                                          std::mt19937_64& rng) {
  Conjunction out = c;
  Atom& a = out[k];
  const auto dom = e.domain(a.lhs_src);
  if (a.equal) {
    if (dom && *dom != Domain::Real) {
      a.equal = false;
    } else if (dom) {
      static const std::array<const char*, 4> shifts{"1/3", "-2/5", "3/7", "-1/2"};
      a.rhs_src = "(" + a.rhs_src + ") + " + shifts[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    } else {
      a.equal = false;
    }
  } else {
    if (!dom) return std::nullopt;
    a.equal = true;
  }
  a.src = a.lhs_src + (a.equal ? " = " : " != ") + a.rhs_src;
  return out;
}

// ---- instantiation -------------------------------------------------------------

struct Instance {
  const CatalogEntry* entry = nullptr;
  int m = 1;
  ParamPoint point;
  std::string fchoice = "opaque";
  ParseContext ctx;
  Substitution values;
  RDSystem sys;

  Expr expr(const std::string& src) const { return subst(parse(src, ctx), values); }

  /// Expands "{i}" over 1..m; `gamma` is bound for Ghat and the macro "gamma".
  std::vector<Generator> generators(const std::string& src, const Expr& gamma = Expr(0)) const {
    std::vector<std::string> forms;
    if (src.find("{i}") == std::string::npos) {
      forms.push_back(src);
    } else {
      for (int i = 1; i <= m; ++i) {
        std::string s = src;
        s.replace(s.find("{i}"), 3, std::to_string(i));
        forms.push_back(s);
      }
    }
    ParseContext c = ctx;
    c.macros["gamma"] = gamma;
    const OperatorContext oc{m, sys.A, gamma};
    std::vector<Generator> out;
    for (const auto& f : forms) {
      Generator g = parse_generator(f, c, oc);
      g.eta = subst(g.eta, values);
      for (auto& x : g.xi) x = subst(x, values);
      g.pi = {subst(g.pi[0], values), subst(g.pi[1], values)};
      g.label = f;
      out.push_back(g.simplified());
    }
    return out;
  }

  std::vector<Generator> main() const {
    std::vector<Generator> out;
    for (const auto& s : entry->main) {
      for (auto& g : generators(s)) out.push_back(std::move(g));
    }
    return out;
  }

  std::optional<Rational> gamma(const ClaimSpec& c) const {
    if (!c.gamma) return std::nullopt;
    return value_at(*c.gamma, ctx, point);
  }

  std::vector<Generator> claim_generators(const ClaimSpec& c, std::optional<Rational> gamma_override = {}) const {
    Expr g(0);
    if (gamma_override) {
      g = Expr(*gamma_override);
    } else if (auto q = gamma(c)) {
      g = Expr(*q);
    }
    std::vector<Generator> out;
    for (const auto& s : c.generators) {
      for (auto& x : generators(s, g)) out.push_back(std::move(x));
    }
    return out;
  }
};

inline Substitution fchoice_substitution(const Catalog& cat, const std::string& fchoice) {
  Substitution s;
  if (fchoice == "opaque") return s;
  auto it = cat.fchoices.find(fchoice);
  if (it == cat.fchoices.end()) throw CatalogError("unknown F instantiation '" + fchoice + "'");
  const ParseContext ctx;
  ParseContext body_ctx;
  body_ctx.macros["s"] = sym(body_arg());
  s.bind_function("F1", parse(it->second.first, body_ctx));
  s.bind_function("F2", parse(it->second.second, body_ctx));
  return s;
}

inline Instance instantiate(const Catalog& cat, const CatalogEntry& e, const ParamPoint& p, int m,
                            const std::string& fchoice = "opaque",
                            const std::pair<std::string, std::string>& add = {"0", "0"}) {
  Instance in;
  in.entry = &e;
  in.m = m;
  in.point = p;
  in.fchoice = fchoice;
  in.ctx = detail::entry_context(e, m);
  for (const auto& name : e.free_params()) {
    if (!p.contains(name)) throw CatalogError("entry " + e.id + ": parameter '" + name + "' missing");
    if (!detail::in_domain(*e.domain(name), p.at(name))) {
      throw CatalogError("entry " + e.id + ": parameter '" + name + "' outside its domain");
    }
  }
  if (!holds(e.assign, in.ctx, p) || !holds(e.filter, in.ctx, p)) {
    throw CatalogError("entry " + e.id + ": parameter constraints violated at " + render_point(p));
  }
  in.values = point_substitution(p);
  const Substitution fs = fchoice_substitution(cat, fchoice);
  auto source = [&](const std::string& s, const std::string& extra) {
    return simplify(subst(subst(parse("(" + s + ") + (" + extra + ")", in.ctx), in.values), fs));
  };
  in.sys = RDSystem(m, DiffusionMatrix(Expr(p.at("a"))), {source(e.f1, add.first), source(e.f2, add.second)});
  return in;
}

}  // namespace rdsym
