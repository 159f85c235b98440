#pragma once

// Simultaneous substitution of symbols, opaque functions and Psi.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "rdsym/expr/diff.hpp"

namespace rdsym {

/// Placeholder argument used in bodies of bound opaque functions.
inline Symbol body_arg() { return Symbol::placeholder("s"); }

struct Substitution {
  std::map<Symbol, Expr> symbols;
  std::map<std::string, Expr> functions;  // body in body_arg()
  std::optional<Expr> psi;                // body in x_1..x_dim

  Substitution& bind(const Symbol& s, const Expr& e) {
    symbols[s] = e;
    return *this;
  }
  Substitution& bind_function(const std::string& name, const Expr& body) {
    functions[name] = body;
    return *this;
  }
};

namespace detail {

class Substituter {
 public:
  explicit Substituter(const Substitution& s) : sub_(s) {
    auto u = s.symbols.find(Symbol::jet(1));
    auto v = s.symbols.find(Symbol::jet(2));
    if (u != s.symbols.end() || v != s.symbols.end()) {
      Expr uu = u != s.symbols.end() ? u->second : u_();
      Expr vv = v != s.symbols.end() ? v->second : v_();
      polar_r_ = pow(uu * uu + vv * vv, Rational(1, 2));
      polar_z_ = atan(vv / uu);
    }
  }

  Expr run(const Expr& e) {
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    Expr out = apply(e);
    memo_.emplace(e, out);
    return out;
  }

 private:
  const Substitution& sub_;
  std::optional<Expr> polar_r_, polar_z_;
  std::unordered_map<Expr, Expr, ExprHash> memo_;
  std::map<std::pair<std::string, int>, Expr> fn_derivs_;

  Expr function_body(const std::string& name, int order) {
    auto key = std::make_pair(name, order);
    if (auto it = fn_derivs_.find(key); it != fn_derivs_.end()) return it->second;
    Expr body = order == 0 ? sub_.functions.at(name) : diff(function_body(name, order - 1), body_arg());
    fn_derivs_.emplace(key, body);
    return body;
  }

  Expr apply(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
      case NodeKind::Number:
        return e;
      case NodeKind::Sym: {
        if (auto it = sub_.symbols.find(n.sym); it != sub_.symbols.end()) return it->second;
        if (n.sym.kind == SymbolKind::PolarR && polar_r_) return *polar_r_;
        if (n.sym.kind == SymbolKind::PolarZ && polar_z_) return *polar_z_;
        return e;
      }
      case NodeKind::Add: {
        std::vector<Expr> parts{Expr(n.num)};
        for (const auto& [t, q] : n.ops) parts.push_back(Expr(q) * run(t));
        return add(parts);
      }
      case NodeKind::Mul: {
        std::vector<Expr> fs{Expr(n.num)};
        for (const auto& [b, q] : n.ops) fs.push_back(pow(run(b), q));
        return mul(fs);
      }
      case NodeKind::Func: {
        Expr a = run(n.args[0]);
        switch (n.fn) {
          case Fn::Exp:
            return exp(a);
          case Fn::Ln:
            return ln(a);
          case Fn::Sin:
            return sin(a);
          case Fn::Cos:
            return cos(a);
          case Fn::Atan:
            return atan(a);
        }
        return e;
      }
      case NodeKind::Opaque: {
        Expr a = run(n.args[0]);
        if (sub_.functions.contains(n.name)) {
          Substitution inner;
          inner.bind(body_arg(), a);
          return Substituter(inner).run(function_body(n.name, n.order));
        }
        return opaque(n.name, n.order, a);
      }
      case NodeKind::Psi: {
        Expr k = run(n.args[0]);
        if (sub_.psi) {
          Expr body = *sub_.psi;
          for (int i = 0; i < 3; ++i) {
            for (int c = 0; c < n.dx[static_cast<std::size_t>(i)]; ++c) body = diff(body, Symbol::space(i + 1));
          }
          return run(body);
        }
        return psi(k, n.dim, n.dx);
      }
    }
    return e;
  }
};

}  // namespace detail

/// Simultaneous substitution. Binding u or v re-expresses R and z. Jets of
/// order above `max_jet_order` in the result raise JetOrderError.
inline Expr subst(const Expr& e, const Substitution& s, int max_jet_order = 2) {
  Expr out = detail::Substituter(s).run(e);
  if (rdsym::max_jet_order(out) > max_jet_order) throw JetOrderError("jet order exceeded after substitution");
  return out;
}

inline Expr subst(const Expr& e, const Symbol& s, const Expr& value) {
  Substitution sub;
  sub.bind(s, value);
  return subst(e, sub);
}

}  // namespace rdsym
