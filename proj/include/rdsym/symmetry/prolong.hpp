#pragma once

// Second prolongation and the brute-force invariance test.

#include <map>

#include "rdsym/symmetry/generator.hpp"

namespace rdsym {

/// Coefficients of the prolonged field: pr X = X + sum_J phi^J d_{u_J}.
struct Prolongation {
  int m = 1;
  Vec2 phi{Expr(0), Expr(0)};   // coefficient of d_{u_b}, equal to -pi^b
  std::map<Symbol, Expr> coeff;  // jet u_{b,J} (order 1, 2) -> phi^J_b

  const Expr& at(const Symbol& jet) const {
    auto it = coeff.find(jet);
    if (it == coeff.end()) throw SymbolicError("jet outside the second prolongation");
    return it->second;
  }
};

namespace detail {

inline std::vector<Symbol> independents(int m) {
  std::vector<Symbol> out{Symbol::time()};
  for (int i = 1; i <= m; ++i) out.push_back(Symbol::space(i));
  return out;
}

inline Expr coefficient_of(const Generator& X, const Symbol& var) {
  return var.kind == SymbolKind::Time ? X.eta : X.xi[static_cast<std::size_t>(var.index - 1)];
}

}  // namespace detail

/// phi^{J,k} = D_k phi^J - sum_j u_{J,j} D_k xi^j, with xi^t = eta. Jets with two
/// time derivatives are not generated; the systems are first order in t.
inline Prolongation prolong2(const Generator& X) {
  X.validate();
  Prolongation pr;
  pr.m = X.m;
  pr.phi = {-X.pi[0], -X.pi[1]};
  const auto vars = detail::independents(X.m);
  auto Dk = [&](const Symbol& j, const Symbol& k) {
    return total_derivative(detail::coefficient_of(X, j), k, 3);
  };
  for (int b = 1; b <= 2; ++b) {
    const Symbol base = Symbol::jet(b);
    std::map<Symbol, Expr> level{{base, pr.phi[static_cast<std::size_t>(b - 1)]}};
    for (int order = 1; order <= 2; ++order) {
      std::map<Symbol, Expr> next;
      for (const auto& [J, phiJ] : level) {
        for (const Symbol& k : vars) {
          Symbol Jk = J.jet_derivative(k);
          if (Jk.nt > 1 || (order == 2 && Jk.nt > 0)) continue;
          if (next.contains(Jk)) continue;
          std::vector<Expr> parts{total_derivative(phiJ, k, 3)};
          for (const Symbol& j : vars) {
            Expr d = Dk(j, k);
            if (!d.is_zero()) parts.push_back(-sym(J.jet_derivative(j)) * d);
          }
          next.emplace(Jk, simplify(sum(parts)));
        }
      }
      for (const auto& [s, e] : next) pr.coeff.emplace(s, e);
      level = std::move(next);
    }
  }
  return pr;
}

/// pr X applied to an expression in (t, x, U, jets up to order 2).
inline Expr apply_prolonged(const Generator& X, const Prolongation& pr, const Expr& F) {
  std::vector<Expr> parts{X.eta * diff(F, Symbol::time())};
  for (int i = 1; i <= X.m; ++i) parts.push_back(X.xi[static_cast<std::size_t>(i - 1)] * diff(F, Symbol::space(i)));
  for (int b = 1; b <= 2; ++b) parts.push_back(pr.phi[static_cast<std::size_t>(b - 1)] * diff(F, Symbol::jet(b)));
  for (const Symbol& s : free_symbols(F)) {
    if (!s.is_jet() || s.jet_order() == 0) continue;
    parts.push_back(pr.at(s) * diff(F, s));
  }
  return sum(parts);
}

/// pr X (residual) restricted to solutions. Zero pair iff X is a Lie point symmetry.
inline Vec2 invariance_residual(const RDSystem& sys, const Generator& X) {
  if (X.m != sys.m) throw SymbolicError("generator and system dimensions differ");
  const Prolongation pr = prolong2(X);
  const Vec2 res = residual(sys);
  const Substitution rules = solution_manifold_rules(sys);
  Vec2 out;
  for (std::size_t b = 0; b < 2; ++b) {
    Expr r = simplify(subst(apply_prolonged(X, pr, res[b]), rules, 3));
    if (max_jet_order(r) > 2) throw JetOrderError("third-order jets did not cancel in the invariance condition");
    out[b] = r;
  }
  return out;
}

struct PairVerdict {
  std::array<ZeroVerdict, 2> component;
  bool zero() const { return component[0].zero() && component[1].zero(); }
};

inline PairVerdict verdict(const Vec2& v, const ZeroTestOptions& opt = {}) {
  return {{is_zero(v[0], opt), is_zero(v[1], opt)}};
}

inline bool is_symmetry(const RDSystem& sys, const Generator& X, const ZeroTestOptions& opt = {}) {
  return verdict(invariance_residual(sys, X), opt).zero();
}

}  // namespace rdsym
