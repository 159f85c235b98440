#pragma once

// Generators written as linear combinations of named operators, e.g.
//   "exp(kappa*t)*(mu*DR - Dz)"   or   "sigma*D - DR"
// Operator names:
//   P0 P1 P2 P3          d_t, d_{x_i}
//   J12 J13 J23          rotations
//   D K G1.. Ghat1..     dilatation, conformal, Galilei, exponential Galilei
//   Du Dv                d_u, d_v
//   DR Dz                R d_R = u d_u + v d_v,  d_z = -v d_u + u d_v
//   Ainv                 (A^{-1} U) . d_U

#include <map>
#include <string>

#include "rdsym/symmetry/classify.hpp"

namespace rdsym {

struct OperatorContext {
  int m = 1;
  DiffusionMatrix A;
  Expr gamma{0};  // exponent used by Ghat
};

namespace detail {

inline std::string op_prefix() { return "op:"; }

inline std::optional<Generator> named_operator(const std::string& name, const OperatorContext& oc) {
  const int m = oc.m;
  auto idx = [&](const std::string& s) -> int {
    if (s.size() != 1 || s[0] < '1' || s[0] > '3') return -1;
    const int i = s[0] - '0';
    return i <= m ? i : -1;
  };
  if (name == "P0") return P0(m);
  if (name == "D") return Dil(m);
  if (name == "K") return Conf(m, oc.A);
  if (name == "Ainv") return Ainv_field(m, oc.A);
  if (name == "Du" || name == "Dv") {
    Generator g(m);
    g.pi[name == "Du" ? 0 : 1] = Expr(-1);
    g.label = name;
    return g;
  }
  if (name == "DR") {
    Generator g(m);
    g.pi = {-u_(), -v_()};
    g.label = name;
    return g;
  }
  if (name == "Dz") {
    Generator g(m);
    g.pi = {v_(), -u_()};
    g.label = name;
    return g;
  }
  if (name.size() == 2 && name[0] == 'P' && idx(name.substr(1)) > 0) return P(m, idx(name.substr(1)));
  if (name.size() == 3 && name[0] == 'J' && idx(name.substr(1, 1)) > 0 && idx(name.substr(2, 1)) > 0) {
    return Jrot(m, idx(name.substr(1, 1)), idx(name.substr(2, 1)));
  }
  if (name.size() == 2 && name[0] == 'G' && idx(name.substr(1)) > 0) return Gal(m, idx(name.substr(1)), oc.A);
  if (name.size() == 5 && name.rfind("Ghat", 0) == 0 && idx(name.substr(4)) > 0) {
    return GalExp(m, idx(name.substr(4)), oc.gamma, oc.A);
  }
  return std::nullopt;
}

inline const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names{"P0",   "P1",   "P2",   "P3", "J12", "J13", "J23", "D",  "K",
                                              "G1",   "G2",   "G3",   "Ghat1", "Ghat2", "Ghat3", "Du", "Dv",
                                              "DR",   "Dz",   "Ainv"};
  return names;
}

}  // namespace detail

/// Parses a generator written over named operators. Coefficients may depend on
/// t, x and parameters and must enter linearly.
inline Generator parse_generator(const std::string& src, ParseContext ctx, const OperatorContext& oc) {
  ctx = with_space_macros(std::move(ctx), oc.m);
  std::map<std::string, Generator> ops;
  for (const auto& n : detail::operator_names()) {
    if (auto g = detail::named_operator(n, oc)) {
      ops.emplace(n, *g);
      ctx.macros[n] = sym(Symbol::placeholder(detail::op_prefix() + n));
    }
  }
  const Expr e = expand(parse(src, ctx));
  Generator out(oc.m);
  std::vector<Expr> used;
  for (const auto& [name, g] : ops) {
    const Symbol ph = Symbol::placeholder(detail::op_prefix() + name);
    if (!depends_on(e, ph)) continue;
    const Expr c = simplify(diff(e, ph));
    if (depends_on(c, ph)) throw ParseError("operator '" + name + "' enters non-linearly", 0);
    for (const Symbol& s : free_symbols(c)) {
      if (s.is_jet() || s.kind == SymbolKind::PolarR || s.kind == SymbolKind::PolarZ) {
        throw ParseError("operator coefficients must not depend on u, v", 0);
      }
    }
    out += g.scaled(c);
    used.push_back(c * sym(ph));
  }
  if (!proven_zero(e - sum(used))) throw ParseError("generator has a term without an operator", 0);
  out.label = src;
  return out.simplified();
}

}  // namespace rdsym
