#pragma once

#include <unordered_map>

#include "rdsym/expr/traverse.hpp"

namespace rdsym {

namespace detail {

inline Expr diff_rec(const Expr& e, const Symbol& s, std::unordered_map<Expr, Expr, ExprHash>& memo) {
  if (auto it = memo.find(e); it != memo.end()) return it->second;
  const Node& n = e.node();
  Expr out(0);
  switch (n.kind) {
    case NodeKind::Number:
      break;
    case NodeKind::Sym:
      if (n.sym == s) {
        out = Expr(1);
      } else if (s.kind == SymbolKind::Jet && s.jet_order() == 0) {
        // R = (u^2+v^2)^(1/2), z = arctan(v/u)
        const bool is_u = s.index == 1;
        if (n.sym.kind == SymbolKind::PolarR) {
          out = (is_u ? u_() : v_()) / R_();
        } else if (n.sym.kind == SymbolKind::PolarZ) {
          out = (is_u ? -v_() : u_()) * pow(R_(), Rational(-2));
        }
      }
      break;
    case NodeKind::Add: {
      std::vector<Expr> parts;
      for (const auto& [t, q] : n.ops) {
        Expr d = diff_rec(t, s, memo);
        if (!d.is_zero()) parts.push_back(Expr(q) * d);
      }
      out = add(parts);
      break;
    }
    case NodeKind::Mul: {
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < n.ops.size(); ++i) {
        const auto& [b, q] = n.ops[i];
        Expr d = diff_rec(b, s, memo);
        if (d.is_zero()) continue;
        std::vector<Expr> fs;
        fs.reserve(n.ops.size() + 2);
        fs.push_back(Expr(n.num * q));
        for (std::size_t j = 0; j < n.ops.size(); ++j) {
          if (j == i) {
            fs.push_back(pow(b, q - 1));
          } else {
            fs.push_back(pow(n.ops[j].first, n.ops[j].second));
          }
        }
        fs.push_back(d);
        parts.push_back(mul(fs));
      }
      out = add(parts);
      break;
    }
    case NodeKind::Func: {
      const Expr& a = n.args[0];
      Expr d = diff_rec(a, s, memo);
      if (d.is_zero()) break;
      switch (n.fn) {
        case Fn::Exp:
          out = e * d;
          break;
        case Fn::Ln:
          out = d / a;
          break;
        case Fn::Sin:
          out = cos(a) * d;
          break;
        case Fn::Cos:
          out = -sin(a) * d;
          break;
        case Fn::Atan:
          out = d / (Expr(1) + pow(a, Rational(2)));
          break;
      }
      break;
    }
    case NodeKind::Opaque: {
      Expr d = diff_rec(n.args[0], s, memo);
      if (!d.is_zero()) out = opaque(n.name, n.order + 1, n.args[0]) * d;
      break;
    }
    case NodeKind::Psi:
      if (s.kind == SymbolKind::Space && s.index <= n.dim) {
        auto dx = n.dx;
        ++dx[static_cast<std::size_t>(s.index - 1)];
        out = psi(n.args[0], n.dim, dx);
      } else if (depends_on(n.args[0], s)) {
        throw SymbolicError("Psi cannot be differentiated with respect to its eigenvalue");
      }
      break;
  }
  memo.emplace(e, out);
  return out;
}

}  // namespace detail

/// Partial derivative; R and z are differentiated through u and v.
inline Expr diff(const Expr& e, const Symbol& s) {
  std::unordered_map<Expr, Expr, ExprHash> memo;
  return detail::diff_rec(e, s, memo);
}

inline Expr diff(const Expr& e, const Expr& s) { return diff(e, s.symbol()); }

/// Total derivative D_var treating jets as functions of (t, x).
/// Jets beyond `max_order` raise JetOrderError.
inline Expr total_derivative(const Expr& e, const Symbol& var, int max_order = 2) {
  if (!var.is_independent()) throw SymbolicError("total derivative needs t or x_i");
  std::vector<Expr> parts{diff(e, var)};
  for (const Symbol& s : free_symbols(e)) {
    if (!s.is_jet()) continue;
    Expr d = diff(e, s);
    if (d.is_zero()) continue;
    Symbol next = s.jet_derivative(var);
    if (next.jet_order() > max_order) {
      throw JetOrderError("jet order exceeded: derivative of order " + std::to_string(next.jet_order()) +
                          " requested");
    }
    parts.push_back(d * sym(next));
  }
  return sum(parts);
}

inline Expr total_derivative(const Expr& e, const Expr& var, int max_order = 2) {
  return total_derivative(e, var.symbol(), max_order);
}

}  // namespace rdsym
