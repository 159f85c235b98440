#pragma once

#include <set>

#include "rdsym/expr/construct.hpp"

namespace rdsym {

namespace detail {
inline void collect_symbols(const Expr& e, std::set<Symbol>& out) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Number:
      return;
    case NodeKind::Sym:
      out.insert(n.sym);
      if (n.sym.kind == SymbolKind::PolarR || n.sym.kind == SymbolKind::PolarZ) {
        out.insert(Symbol::jet(1));
        out.insert(Symbol::jet(2));
      }
      return;
    case NodeKind::Add:
    case NodeKind::Mul:
      for (const auto& [b, q] : n.ops) collect_symbols(b, out);
      return;
    case NodeKind::Func:
    case NodeKind::Opaque:
      collect_symbols(n.args[0], out);
      return;
    case NodeKind::Psi:
      collect_symbols(n.args[0], out);
      for (int i = 1; i <= n.dim; ++i) out.insert(Symbol::space(i));
      return;
  }
}
}  // namespace detail

/// Symbols the expression depends on. R and z imply u and v; Psi implies x_1..x_dim.
inline std::set<Symbol> free_symbols(const Expr& e) {
  std::set<Symbol> out;
  detail::collect_symbols(e, out);
  return out;
}

inline bool depends_on(const Expr& e, const Symbol& s) { return free_symbols(e).contains(s); }

inline int max_jet_order(const Expr& e) {
  int k = -1;
  for (const auto& s : free_symbols(e)) {
    if (s.is_jet()) k = std::max(k, s.jet_order());
  }
  return k;
}

/// Visits every node once per occurrence, pre-order.
template <class F>
void visit(const Expr& e, F&& f) {
  f(e);
  const Node& n = e.node();
  for (const auto& [b, q] : n.ops) visit(b, f);
  for (const auto& a : n.args) visit(a, f);
}

inline bool contains_opaque(const Expr& e) {
  bool found = false;
  visit(e, [&](const Expr& x) { found = found || x.kind() == NodeKind::Opaque || x.kind() == NodeKind::Psi; });
  return found;
}

}  // namespace rdsym
