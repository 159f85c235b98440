#pragma once

#include <algorithm>

#include "rdsym/expr/expr.hpp"

namespace rdsym {

namespace detail {

inline Rational rational_pow(const Rational& q, long e) {
  mpz_class num, den;
  const unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
  Rational r = e < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

inline bool exact_root(const mpz_class& z, unsigned long k, mpz_class& out) {
  if (z < 0) return false;
  return mpz_root(out.get_mpz_t(), z.get_mpz_t(), k) != 0;
}

inline Expr make_mul_node(const Rational& coeff, std::vector<Term> fs) {
  Node n;
  n.kind = NodeKind::Mul;
  n.num = coeff;
  n.ops = std::move(fs);
  return make(std::move(n));
}

inline Expr make_add_node(const Rational& c, std::vector<Term> ts) {
  Node n;
  n.kind = NodeKind::Add;
  n.num = c;
  n.ops = std::move(ts);
  return make(std::move(n));
}

inline Expr make_func(Fn fn, const Expr& arg) {
  Node n;
  n.kind = NodeKind::Func;
  n.fn = fn;
  n.args = {arg};
  return make(std::move(n));
}

/// (coefficient, rest) with rest free of a numeric factor.
inline std::pair<Rational, Expr> split_coeff(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == NodeKind::Number) return {n.num, Expr(1)};
  if (n.kind == NodeKind::Mul && n.num != 1) {
    if (n.ops.size() == 1 && n.ops[0].second == 1) return {n.num, n.ops[0].first};
    return {n.num, make_mul_node(Rational(1), n.ops)};
  }
  return {Rational(1), e};
}

inline bool is_func(const Expr& e, Fn fn) {
  return e.kind() == NodeKind::Func && e.node().fn == fn;
}

inline void sort_merge(std::vector<Term>& v) {
  std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return compare(a.first, b.first) < 0; });
  std::vector<Term> out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second == 0; }), out.end());
  v = std::move(out);
}

const Expr& u2v2();

Expr build_mul(Rational c, std::vector<Term> fs);

}  // namespace detail

inline Expr sym(const Symbol& s) {
  Node n;
  n.kind = NodeKind::Sym;
  n.sym = s;
  return detail::make(std::move(n));
}

inline Expr add(std::span<const Expr> xs) {
  Rational c = 0;
  std::vector<Term> terms;
  terms.reserve(xs.size());
  for (const Expr& x : xs) {
    const Node& n = x.node();
    switch (n.kind) {
      case NodeKind::Number:
        c += n.num;
        break;
      case NodeKind::Add:
        c += n.num;
        terms.insert(terms.end(), n.ops.begin(), n.ops.end());
        break;
      default: {
        auto [q, rest] = detail::split_coeff(x);
        terms.emplace_back(std::move(rest), std::move(q));
      }
    }
  }
  detail::sort_merge(terms);
  if (terms.empty()) return Expr(c);
  if (c == 0 && terms.size() == 1) {
    if (terms[0].second == 1) return terms[0].first;
    const Expr& t = terms[0].first;
    if (t.kind() == NodeKind::Mul) return detail::make_mul_node(terms[0].second, t.node().ops);
    return detail::make_mul_node(terms[0].second, {{t, Rational(1)}});
  }
  c.canonicalize();
  return detail::make_add_node(c, std::move(terms));
}

namespace detail {

inline Expr build_mul(Rational c, std::vector<Term> fs) {
  for (int pass = 0; pass < 3; ++pass) {
    sort_merge(fs);
    bool changed = false;
    // numeric bases
    std::vector<Term> keep;
    keep.reserve(fs.size());
    std::vector<std::pair<Expr, Rational>> exps;
    for (auto& f : fs) {
      if (f.first.is_number() && is_integer(f.second)) {
        c *= rational_pow(f.first.number(), f.second.get_num().get_si());
        changed = true;
      } else if (f.first.is_number() && f.first.number() == 1) {
        changed = true;
      } else if (is_func(f.first, Fn::Exp)) {
        exps.emplace_back(f.first.node().args[0], f.second);
      } else {
        keep.push_back(std::move(f));
      }
    }
    if (c == 0) return Expr(0);
    if (exps.size() > 1 || (exps.size() == 1 && exps[0].second != 1)) {
      std::vector<Expr> parts;
      for (auto& [a, q] : exps) parts.push_back(Expr(q) * a);
      Expr e = exp(add(parts));
      changed = true;
      const Node& en = e.node();
      if (en.kind == NodeKind::Number) {
        c *= en.num;
      } else if (en.kind == NodeKind::Mul) {
        c *= en.num;
        keep.insert(keep.end(), en.ops.begin(), en.ops.end());
      } else {
        keep.emplace_back(e, Rational(1));
      }
    } else if (exps.size() == 1) {
      keep.emplace_back(make_func(Fn::Exp, exps[0].first), Rational(1));
    }
    fs = std::move(keep);
    if (!changed) break;
  }
  sort_merge(fs);
  c.canonicalize();
  if (c == 0) return Expr(0);
  if (fs.empty()) return Expr(c);
  if (fs.size() == 1 && fs[0].second == 1) {
    const Expr& b = fs[0].first;
    if (c == 1) return b;
    if (b.kind() == NodeKind::Add) {
      std::vector<Term> ts = b.node().ops;
      for (auto& t : ts) t.second *= c;
      return make_add_node(b.node().num * c, std::move(ts));
    }
  }
  return make_mul_node(c, std::move(fs));
}

}  // namespace detail

inline Expr mul(std::span<const Expr> xs) {
  Rational c = 1;
  std::vector<Term> fs;
  for (const Expr& x : xs) {
    const Node& n = x.node();
    if (n.kind == NodeKind::Number) {
      if (n.num == 0) return Expr(0);
      c *= n.num;
    } else if (n.kind == NodeKind::Mul) {
      c *= n.num;
      fs.insert(fs.end(), n.ops.begin(), n.ops.end());
    } else {
      fs.emplace_back(x, Rational(1));
    }
  }
  return detail::build_mul(std::move(c), std::move(fs));
}

inline Expr pow(const Expr& base, const Rational& e) {
  if (e == 0) return Expr(1);
  if (e == 1) return base;
  const Node& n = base.node();
  switch (n.kind) {
    case NodeKind::Number: {
      const Rational& q = n.num;
      if (q == 0) {
        if (e > 0) return Expr(0);
        throw SymbolicError("division by zero");
      }
      if (q == 1) return Expr(1);
      if (is_integer(e)) return Expr(detail::rational_pow(q, e.get_num().get_si()));
      const unsigned long r = e.get_den().get_ui();
      mpz_class nr, dr;
      if (detail::exact_root(q.get_num(), r, nr) && detail::exact_root(q.get_den(), r, dr)) {
        return Expr(detail::rational_pow(Rational(nr, dr), e.get_num().get_si()));
      }
      return detail::make_mul_node(Rational(1), {{base, e}});
    }
    case NodeKind::Mul: {
      std::vector<Term> fs;
      Rational c = 1;
      if (is_integer(e)) {
        c = detail::rational_pow(n.num, e.get_num().get_si());
      } else if (n.num > 0) {
        if (n.num != 1) fs.emplace_back(Expr(n.num), e);
      } else {
        return detail::make_mul_node(Rational(1), {{base, e}});
      }
      for (const auto& [b, q] : n.ops) fs.emplace_back(b, q * e);
      return detail::build_mul(c, std::move(fs));
    }
    case NodeKind::Func:
      if (n.fn == Fn::Exp) return exp(Expr(e) * n.args[0]);
      break;
    case NodeKind::Add:
      if (e.get_den() == 2 && base == detail::u2v2()) {
        return pow(R_(), e * 2);
      }
      if (e.get_den() == 2 && n.num == 0 && n.ops.size() == 2 && n.ops[0].second == n.ops[1].second &&
          n.ops[0].second > 0) {
        // c*(u^2+v^2)
        const Rational c = n.ops[0].second;
        if (Expr(Rational(1) / c) * base == detail::u2v2()) return pow(Expr(c), e) * pow(R_(), e * 2);
      }
      break;
    default:
      break;
  }
  return detail::make_mul_node(Rational(1), {{base, e}});
}

inline Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_number()) return pow(base, exponent.number());
  return exp(exponent * ln(base));
}

inline Expr exp(const Expr& x) {
  const Node& n = x.node();
  if (x.is_zero()) return Expr(1);
  if (n.kind == NodeKind::Func && n.fn == Fn::Ln) return n.args[0];
  std::vector<Expr> extracted;
  Expr rest = x;
  if (n.kind == NodeKind::Add) {
    std::vector<Term> remaining;
    for (const auto& [t, q] : n.ops) {
      if (detail::is_func(t, Fn::Ln)) {
        extracted.push_back(pow(t.node().args[0], q));
      } else {
        remaining.push_back({t, q});
      }
    }
    if (!extracted.empty()) {
      if (remaining.empty()) {
        rest = Expr(n.num);
      } else {
        std::vector<Expr> parts{Expr(n.num)};
        for (auto& [t, q] : remaining) parts.push_back(Expr(q) * t);
        rest = add(parts);
      }
    }
  } else if (n.kind == NodeKind::Mul && n.ops.size() == 1 && n.ops[0].second == 1 &&
             detail::is_func(n.ops[0].first, Fn::Ln)) {
    return pow(n.ops[0].first.node().args[0], n.num);
  }
  if (!extracted.empty()) {
    if (!rest.is_zero()) extracted.push_back(detail::make_func(Fn::Exp, rest));
    return mul(extracted);
  }
  return detail::make_func(Fn::Exp, x);
}

inline Expr ln(const Expr& x) {
  const Node& n = x.node();
  switch (n.kind) {
    case NodeKind::Number:
      if (n.num == 1) return Expr(0);
      if (n.num == 0) throw SymbolicError("logarithm of zero");
      break;
    case NodeKind::Func:
      if (n.fn == Fn::Exp) return n.args[0];
      break;
    case NodeKind::Mul:
      if (n.num > 0) {
        std::vector<Expr> parts;
        if (n.num != 1) parts.push_back(ln(Expr(n.num)));
        for (const auto& [b, q] : n.ops) parts.push_back(Expr(q) * ln(b));
        return add(parts);
      }
      break;
    case NodeKind::Add:
      if (x == detail::u2v2()) return Expr(2) * ln(R_());
      break;
    default:
      break;
  }
  return detail::make_func(Fn::Ln, x);
}

inline Expr sin(const Expr& x) {
  if (x.is_zero()) return Expr(0);
  return detail::make_func(Fn::Sin, x);
}

inline Expr cos(const Expr& x) {
  if (x.is_zero()) return Expr(1);
  return detail::make_func(Fn::Cos, x);
}

inline Expr atan(const Expr& x) {
  if (x.is_zero()) return Expr(0);
  static const Expr ratio = v_() / u_();
  if (x == ratio) return z_();
  return detail::make_func(Fn::Atan, x);
}

inline Expr opaque(const std::string& name, int order, const Expr& arg) {
  Node n;
  n.kind = NodeKind::Opaque;
  n.name = name;
  n.order = order;
  n.args = {arg};
  return detail::make(std::move(n));
}

inline Expr psi(const Expr& eigenvalue, int dim, std::array<int, 3> dx) {
  Node n;
  n.kind = NodeKind::Psi;
  n.args = {eigenvalue};
  n.dim = dim;
  n.dx = dx;
  return detail::make(std::move(n));
}

namespace detail {
inline const Expr& u2v2() {
  static const Expr e = pow(u_(), Rational(2)) + pow(v_(), Rational(2));
  return e;
}
}  // namespace detail

// ---- structural helpers ---------------------------------------------------

/// Additive decomposition: constant plus (term, coefficient) list.
inline std::vector<Term> terms_of(const Expr& e) {
  const Node& n = e.node();
  std::vector<Term> out;
  if (n.kind == NodeKind::Add) {
    if (n.num != 0) out.emplace_back(Expr(1), n.num);
    out.insert(out.end(), n.ops.begin(), n.ops.end());
  } else if (!e.is_zero()) {
    auto [q, rest] = detail::split_coeff(e);
    out.emplace_back(rest, q);
  }
  return out;
}

/// Multiplicative decomposition: coefficient and (base, exponent) list.
inline std::pair<Rational, std::vector<Term>> factors_of(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == NodeKind::Number) return {n.num, {}};
  if (n.kind == NodeKind::Mul) return {n.num, n.ops};
  return {Rational(1), {{e, Rational(1)}}};
}

inline Expr sum(const std::vector<Expr>& xs) { return add(std::span<const Expr>(xs)); }
inline Expr product(const std::vector<Expr>& xs) { return mul(std::span<const Expr>(xs)); }

}  // namespace rdsym
