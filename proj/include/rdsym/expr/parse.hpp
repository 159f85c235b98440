#pragma once

// Recursive-descent parser for the expression grammar used by the catalog,
// system descriptors and the command line.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "rdsym/expr/construct.hpp"

namespace rdsym {

class ParseError : public SymbolicError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : SymbolicError(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct ParseContext {
  std::set<std::string> params;
  std::set<std::string> functions{"F1", "F2"};
  std::map<std::string, Expr> macros;
  int dim = 1;

  ParseContext& with_params(std::initializer_list<std::string> ps) {
    params.insert(ps);
    return *this;
  }
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, const ParseContext& ctx) : src_(src), ctx_(ctx) {}

  Expr parse_all() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view src_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      Expr e = unary();
      if (e.is_number()) return pow(base, e.number());
      return pow(base, e);
    }
    return base;
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string whole(src_.substr(start, pos_ - start));
    Rational q(whole);
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      const std::size_t fs = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string frac(src_.substr(fs, pos_ - fs));
      if (!frac.empty()) {
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        Rational f(mpz_class(frac), den);
        f.canonicalize();
        q += f;
      }
    }
    return Expr(q);
  }

  std::string name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  // "u_tx1x2" -> jet, or nullopt when the suffix is malformed
  static std::optional<Symbol> jet_symbol(const std::string& id) {
    if (id.size() < 3 || (id[0] != 'u' && id[0] != 'v') || id[1] != '_') return std::nullopt;
    Symbol s = Symbol::jet(id[0] == 'u' ? 1 : 2);
    std::size_t i = 2;
    while (i < id.size()) {
      if (id[i] == 't') {
        ++s.nt;
        ++i;
      } else if (id[i] == 'x' && i + 1 < id.size() && id[i + 1] >= '1' && id[i + 1] <= '3') {
        ++s.nx[static_cast<std::size_t>(id[i + 1] - '1')];
        i += 2;
      } else {
        return std::nullopt;
      }
    }
    return s;
  }

  static std::optional<std::array<int, 3>> x_multi_index(std::string_view suffix) {
    std::array<int, 3> dx{0, 0, 0};
    std::size_t i = 0;
    while (i < suffix.size()) {
      if (suffix[i] == 'x' && i + 1 < suffix.size() && suffix[i + 1] >= '1' && suffix[i + 1] <= '3') {
        ++dx[static_cast<std::size_t>(suffix[i + 1] - '1')];
        i += 2;
      } else {
        return std::nullopt;
      }
    }
    return dx;
  }

  Expr call(const std::string& id, std::size_t at) {
    Expr a = expr();
    expect(')');
    if (id == "exp") return exp(a);
    if (id == "ln" || id == "log") return ln(a);
    if (id == "sin") return sin(a);
    if (id == "cos") return cos(a);
    if (id == "arctan" || id == "atan") return atan(a);
    if (id == "sqrt") return pow(a, Rational(1, 2));
    if (ctx_.functions.contains(id)) return opaque(id, 0, a);
    if (auto us = id.find("_d"); us != std::string::npos && ctx_.functions.contains(id.substr(0, us))) {
      const std::string k = id.substr(us + 2);
      if (!k.empty() && k.find_first_not_of("0123456789") == std::string::npos) {
        return opaque(id.substr(0, us), std::stoi(k), a);
      }
    }
    if (id == "Psi") return psi(a, ctx_.dim);
    if (id.rfind("Psi_", 0) == 0) {
      if (auto dx = x_multi_index(std::string_view(id).substr(4))) return psi(a, ctx_.dim, *dx);
    }
    throw ParseError("unknown function '" + id + "'", at);
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') {
      throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }
    const std::size_t at = pos_;
    const std::string id = name();
    if (accept('(')) return call(id, at);
    if (auto it = ctx_.macros.find(id); it != ctx_.macros.end()) return it->second;
    if (ctx_.params.contains(id)) return param(id);
    if (id == "t") return t_();
    if (id == "u") return u_();
    if (id == "v") return v_();
    if (id == "R") return R_();
    if (id == "z") return z_();
    if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '3') return x_(id[1] - '0');
    if (auto j = jet_symbol(id)) return sym(*j);
    throw ParseError("unknown symbol '" + id + "'", at);
  }
};

}  // namespace detail

inline Expr parse(std::string_view src, const ParseContext& ctx = {}) {
  return detail::Parser(src, ctx).parse_all();
}

}  // namespace rdsym
