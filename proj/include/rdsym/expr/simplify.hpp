#pragma once

// Expansion to a canonical sum of monomials over atoms, the confluent rewrite
// set (polar identity R^2 = u^2+v^2, cos^2 = 1 - sin^2, Laplace constraint on
// Psi), and a complete zero test for rational functions in those atoms.

#include <map>
#include <unordered_map>

#include "rdsym/expr/construct.hpp"

namespace rdsym {

/// The directed Laplace constraint for Psi: second x_1-derivatives are
/// eliminated via d_1^2 Psi = kappa Psi - sum_{i>1} d_i^2 Psi.
inline Expr psi_rewrite(const Expr& e) {
  const Node& n = e.node();
  if (n.kind != NodeKind::Psi || n.dx[0] < 2) return e;
  auto dx = n.dx;
  dx[0] -= 2;
  std::vector<Expr> parts{n.args[0] * psi_rewrite(psi(n.args[0], n.dim, dx))};
  for (int i = 1; i < n.dim; ++i) {
    auto d = dx;
    d[static_cast<std::size_t>(i)] += 2;
    parts.push_back(-psi_rewrite(psi(n.args[0], n.dim, d)));
  }
  return sum(parts);
}

Expr simplify(const Expr& e);

namespace detail {

class Expander {
 public:
  Expr run(const Expr& e) {
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    Expr out = expand_node(e);
    memo_.emplace(e, out);
    return out;
  }

 private:
  std::unordered_map<Expr, Expr, ExprHash> memo_;

  Expr expand_node(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
      case NodeKind::Number:
      case NodeKind::Sym:
        return e;
      case NodeKind::Func: {
        Expr a = simplify(n.args[0]);
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
      case NodeKind::Opaque:
        return opaque(n.name, n.order, simplify(n.args[0]));
      case NodeKind::Psi: {
        Expr r = psi_rewrite(psi(simplify(n.args[0]), n.dim, n.dx));
        return r;
      }
      case NodeKind::Add: {
        std::vector<Expr> parts{Expr(n.num)};
        for (const auto& [t, q] : n.ops) parts.push_back(Expr(q) * run(t));
        return add(parts);
      }
      case NodeKind::Mul:
        return expand_product(n);
    }
    return e;
  }

  static std::vector<Expr> as_summands(const Expr& s) {
    std::vector<Expr> out;
    for (const auto& [t, q] : terms_of(s)) out.push_back(Expr(q) * t);
    return out;
  }

  Expr expand_product(const Node& n) {
    std::vector<Expr> acc{Expr(n.num)};
    auto distribute = [&](const Expr& s) {
      std::vector<Expr> summands = as_summands(s);
      std::vector<Expr> next;
      next.reserve(acc.size() * summands.size());
      for (const auto& a : acc) {
        for (const auto& b : summands) next.push_back(a * b);
      }
      acc = std::move(next);
    };
    for (const auto& [b, q] : n.ops) {
      Expr base = run(b);
      if (base.kind() == NodeKind::Add && is_integer(q) && q > 0) {
        const long k = q.get_num().get_si();
        for (long i = 0; i < k; ++i) distribute(base);
      } else {
        Expr p = pow(base, q);
        if (p.kind() == NodeKind::Add) {
          distribute(p);
        } else {
          for (auto& a : acc) a = a * p;
        }
      }
    }
    std::vector<Expr> out;
    out.reserve(acc.size());
    for (const auto& a : acc) out.push_back(reduce_term(a));
    return add(out);
  }

  // Rewrites R^k (|k| >= 2) and cos^k (k >= 2) inside one monomial.
  Expr reduce_term(const Expr& term) {
    if (term.kind() != NodeKind::Mul) return term;
    const Node& n = term.node();
    for (std::size_t i = 0; i < n.ops.size(); ++i) {
      const auto& [b, q] = n.ops[i];
      const bool is_r = b.kind() == NodeKind::Sym && b.symbol().kind == SymbolKind::PolarR;
      const bool is_cos = is_func(b, Fn::Cos) && is_integer(q) && q >= 2;
      if (is_r && (q >= 2 || q <= -2)) {
        std::vector<Expr> fs{Expr(n.num)};
        for (std::size_t j = 0; j < n.ops.size(); ++j) {
          if (j != i) fs.push_back(pow(n.ops[j].first, n.ops[j].second));
        }
        if (q >= 2) {
          fs.push_back(pow(b, q - 2));
          return run(mul(fs) * u2v2());
        }
        fs.push_back(pow(b, q + 2));
        fs.push_back(pow(u2v2(), Rational(-1)));
        return run(mul(fs));
      }
      if (is_cos) {
        std::vector<Expr> fs{Expr(n.num)};
        for (std::size_t j = 0; j < n.ops.size(); ++j) {
          if (j != i) fs.push_back(pow(n.ops[j].first, n.ops[j].second));
        }
        fs.push_back(pow(b, q - 2));
        Expr s2 = pow(sin(b.node().args[0]), Rational(2));
        return run(mul(fs) * (Expr(1) - s2));
      }
    }
    return term;
  }
};

/// Multiplies an expanded sum by the product of its denominators and tests the
/// numerator for the zero polynomial.
inline bool numerator_is_zero(const Expr& expanded) {
  if (expanded.is_zero()) return true;
  std::vector<Term> ts = terms_of(expanded);
  std::map<Expr, Rational, ExprLess> denoms;
  for (const auto& [t, q] : ts) {
    for (const auto& [b, k] : factors_of(t).second) {
      if (k < 0) {
        auto [it, fresh] = denoms.emplace(b, -k);
        if (!fresh && it->second < -k) it->second = -k;
      }
    }
  }
  if (denoms.empty()) return false;
  std::vector<Expr> dfs;
  for (const auto& [b, k] : denoms) dfs.push_back(pow(b, k));
  Expr d = product(dfs);
  std::vector<Expr> scaled;
  scaled.reserve(ts.size());
  for (const auto& [t, q] : ts) scaled.push_back(Expr(q) * t * d);
  Expander ex;
  Expr num = ex.run(sum(scaled));
  return num.is_zero();
}

}  // namespace detail

/// Full expansion into a sum of monomials over canonical atoms.
inline Expr expand(const Expr& e) {
  detail::Expander ex;
  Expr cur = ex.run(e);
  // the rewrite set is confluent; a second pass confirms the fixed point
  for (int i = 0; i < 4; ++i) {
    detail::Expander again;
    Expr next = again.run(cur);
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

/// Canonical simplification: the expanded form, or exactly zero when the
/// expression is the zero rational function of its atoms.
inline Expr simplify(const Expr& e) {
  Expr x = expand(e);
  if (detail::numerator_is_zero(x)) return Expr(0);
  return x;
}

inline bool proven_zero(const Expr& e) { return simplify(e).is_zero(); }

}  // namespace rdsym
