#pragma once

// Deterministic rendering in the parser's grammar: render(parse(s)) round-trips.

#include <sstream>
#include <string>

#include "rdsym/expr/construct.hpp"

namespace rdsym {

inline std::string render(const Symbol& s) {
  switch (s.kind) {
    case SymbolKind::Time:
      return "t";
    case SymbolKind::Space:
      return "x" + std::to_string(s.index);
    case SymbolKind::PolarR:
      return "R";
    case SymbolKind::PolarZ:
      return "z";
    case SymbolKind::Param:
    case SymbolKind::Placeholder:
      return s.name;
    case SymbolKind::Jet: {
      std::string out = s.index == 1 ? "u" : "v";
      if (s.jet_order() == 0) return out;
      out += "_";
      for (int k = 0; k < s.nt; ++k) out += "t";
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < s.nx[static_cast<std::size_t>(i)]; ++k) out += "x" + std::to_string(i + 1);
      }
      return out;
    }
  }
  return "?";
}

std::string render(const Expr& e);

namespace detail {

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp:
      return "exp";
    case Fn::Ln:
      return "ln";
    case Fn::Sin:
      return "sin";
    case Fn::Cos:
      return "cos";
    case Fn::Atan:
      return "arctan";
  }
  return "?";
}

inline std::string render_rational(const Rational& q) { return q.get_str(); }

inline std::string render_power(const Expr& b, const Rational& q) {
  std::string base = render(b);
  const NodeKind k = b.kind();
  if (k == NodeKind::Add || k == NodeKind::Mul || (k == NodeKind::Number && (b.number() < 0 || !is_integer(b.number())))) {
    base = "(" + base + ")";
  }
  if (q == 1) return base;
  if (is_integer(q) && q > 0) return base + "^" + q.get_str();
  return base + "^(" + q.get_str() + ")";
}

// Renders a product without its sign; `neg` reports whether the coefficient is negative.
inline std::string render_unsigned_product(const Rational& coeff, const std::vector<Term>& fs, bool& neg) {
  neg = coeff < 0;
  Rational c = neg ? Rational(-coeff) : coeff;
  std::vector<std::string> num, den;
  for (const auto& [b, q] : fs) {
    if (q < 0) {
      den.push_back(render_power(b, -q));
    } else {
      num.push_back(render_power(b, q));
    }
  }
  std::string out;
  if (c.get_num() != 1 || num.empty()) out = c.get_num().get_str();
  for (const auto& s : num) {
    if (!out.empty()) out += "*";
    out += s;
  }
  if (c.get_den() != 1) den.insert(den.begin(), c.get_den().get_str());
  if (!den.empty()) {
    out += "/";
    if (den.size() == 1) {
      out += den[0];
    } else {
      std::string d;
      for (const auto& s : den) d += (d.empty() ? "" : "*") + s;
      out += "(" + d + ")";
    }
  }
  return out;
}

inline std::string render_term(const Expr& t, const Rational& q, bool& neg) {
  if (t.kind() == NodeKind::Mul) {
    return render_unsigned_product(q * t.node().num, t.node().ops, neg);
  }
  return render_unsigned_product(q, {{t, Rational(1)}}, neg);
}

}  // namespace detail

inline std::string render(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Number: {
      if (is_integer(n.num)) return n.num.get_str();
      return n.num.get_str();
    }
    case NodeKind::Sym:
      return render(n.sym);
    case NodeKind::Add: {
      std::string out;
      for (const auto& [t, q] : n.ops) {
        bool neg = false;
        std::string s = detail::render_term(t, q, neg);
        if (out.empty()) {
          out = neg ? "-" + s : s;
        } else {
          out += neg ? " - " : " + ";
          out += s;
        }
      }
      if (n.num != 0) {
        out += n.num < 0 ? " - " : " + ";
        out += detail::render_rational(abs(n.num));
      }
      return out;
    }
    case NodeKind::Mul: {
      bool neg = false;
      std::string s = detail::render_unsigned_product(n.num, n.ops, neg);
      return neg ? "-" + s : s;
    }
    case NodeKind::Func:
      return std::string(detail::fn_name(n.fn)) + "(" + render(n.args[0]) + ")";
    case NodeKind::Opaque: {
      std::string out = n.name;
      if (n.order > 0) out += "_d" + std::to_string(n.order);
      return out + "(" + render(n.args[0]) + ")";
    }
    case NodeKind::Psi: {
      std::string out = "Psi";
      if (n.dx[0] + n.dx[1] + n.dx[2] > 0) {
        out += "_";
        for (int i = 0; i < 3; ++i) {
          for (int k = 0; k < n.dx[static_cast<std::size_t>(i)]; ++k) out += "x" + std::to_string(i + 1);
        }
      }
      return out + "(" + render(n.args[0]) + ")";
    }
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << render(e); }

}  // namespace rdsym
