#pragma once

// Immutable symbolic expressions over the 2-jet of (u, v) with exact rational
// coefficients. Constructors keep every node in a light normal form (flattened,
// like terms and like factors merged); expand()/simplify() do the rest.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rdsym {

using Rational = mpq_class;

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::size_t hash_mpz(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 7);
  const std::size_t n = mpz_size(z.get_mpz_t());
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

inline std::size_t hash_rational(const Rational& q) {
  return hash_mpz(q.get_num()) * 31 + hash_mpz(q.get_den());
}

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

class SymbolicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a derivative or binding would leave the 2-jet.
class JetOrderError : public SymbolicError {
 public:
  using SymbolicError::SymbolicError;
};

enum class SymbolKind : std::uint8_t { Time, Space, Jet, PolarR, PolarZ, Param, Placeholder };

/// Atomic symbol. Jets are u_b differentiated nt times in t and nx[i] times in x_{i+1}.
struct Symbol {
  SymbolKind kind = SymbolKind::Param;
  int index = 0;  // Space: 1..3, Jet: component 1..2
  int nt = 0;
  std::array<int, 3> nx{0, 0, 0};
  std::string name;  // Param / Placeholder

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;

  int jet_order() const { return nt + nx[0] + nx[1] + nx[2]; }

  static Symbol time() { return {SymbolKind::Time, 0, 0, {0, 0, 0}, {}}; }
  static Symbol space(int i) { return {SymbolKind::Space, i, 0, {0, 0, 0}, {}}; }
  static Symbol jet(int comp, int nt = 0, std::array<int, 3> nx = {0, 0, 0}) {
    return {SymbolKind::Jet, comp, nt, nx, {}};
  }
  static Symbol polar_r() { return {SymbolKind::PolarR, 0, 0, {0, 0, 0}, {}}; }
  static Symbol polar_z() { return {SymbolKind::PolarZ, 0, 0, {0, 0, 0}, {}}; }
  static Symbol param(std::string n) { return {SymbolKind::Param, 0, 0, {0, 0, 0}, std::move(n)}; }
  static Symbol placeholder(std::string n) { return {SymbolKind::Placeholder, 0, 0, {0, 0, 0}, std::move(n)}; }

  bool is_jet() const { return kind == SymbolKind::Jet; }
  bool is_independent() const { return kind == SymbolKind::Time || kind == SymbolKind::Space; }

  /// Jet obtained by one more derivative along an independent variable.
  Symbol jet_derivative(const Symbol& var) const {
    Symbol s = *this;
    if (var.kind == SymbolKind::Time) {
      ++s.nt;
    } else {
      ++s.nx[static_cast<std::size_t>(var.index - 1)];
    }
    return s;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(kind) * 1000003u;
    hash_combine(h, static_cast<std::size_t>(index));
    hash_combine(h, static_cast<std::size_t>(nt));
    for (int k : nx) hash_combine(h, static_cast<std::size_t>(k));
    hash_combine(h, std::hash<std::string>{}(name));
    return h;
  }
};

enum class NodeKind : std::uint8_t { Number, Sym, Add, Mul, Func, Opaque, Psi };
enum class Fn : std::uint8_t { Exp, Ln, Sin, Cos, Atan };

struct Node;

class Expr {
 public:
  Expr();  // zero
  Expr(long v);
  Expr(int v) : Expr(static_cast<long>(v)) {}
  Expr(const Rational& q);
  explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  const Node& node() const { return *p_; }
  const Node* get() const { return p_.get(); }
  NodeKind kind() const;
  std::size_t hash() const;

  bool is_number() const { return kind() == NodeKind::Number; }
  bool is_zero() const;
  bool is_one() const;
  const Rational& number() const;
  bool is_symbol() const { return kind() == NodeKind::Sym; }
  const Symbol& symbol() const;

 private:
  std::shared_ptr<const Node> p_;
};

using Term = std::pair<Expr, Rational>;

struct Node {
  NodeKind kind = NodeKind::Number;
  std::size_t hash = 0;
  Rational num{0};       // Number value, Add constant, Mul coefficient
  Symbol sym;            // Sym
  std::vector<Term> ops;  // Add: (term, coefficient); Mul: (base, exponent)
  Fn fn = Fn::Exp;       // Func
  std::vector<Expr> args;  // Func/Opaque: {argument}; Psi: {eigenvalue}
  std::string name;      // Opaque
  int order = 0;         // Opaque formal derivative order
  std::array<int, 3> dx{0, 0, 0};  // Psi derivative multi-index
  int dim = 0;           // Psi spatial dimension
};

// ---- node factories -------------------------------------------------------

namespace detail {

inline std::size_t finish_hash(Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
  switch (n.kind) {
    case NodeKind::Number:
      hash_combine(h, hash_rational(n.num));
      break;
    case NodeKind::Sym:
      hash_combine(h, n.sym.hash());
      break;
    case NodeKind::Add:
    case NodeKind::Mul:
      hash_combine(h, hash_rational(n.num));
      for (const auto& [e, q] : n.ops) {
        hash_combine(h, e.hash());
        hash_combine(h, hash_rational(q));
      }
      break;
    case NodeKind::Func:
      hash_combine(h, static_cast<std::size_t>(n.fn));
      hash_combine(h, n.args[0].hash());
      break;
    case NodeKind::Opaque:
      hash_combine(h, std::hash<std::string>{}(n.name));
      hash_combine(h, static_cast<std::size_t>(n.order));
      hash_combine(h, n.args[0].hash());
      break;
    case NodeKind::Psi:
      hash_combine(h, n.args[0].hash());
      for (int k : n.dx) hash_combine(h, static_cast<std::size_t>(k));
      hash_combine(h, static_cast<std::size_t>(n.dim));
      break;
  }
  n.hash = h;
  return h;
}

inline Expr make(Node n) {
  finish_hash(n);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

inline Expr make_number(const Rational& q) {
  Node n;
  n.kind = NodeKind::Number;
  n.num = q;
  n.num.canonicalize();
  return make(std::move(n));
}

inline const Expr& zero_expr() {
  static const Expr z = make_number(0);
  return z;
}
inline const Expr& one_expr() {
  static const Expr o = make_number(1);
  return o;
}

}  // namespace detail

inline Expr::Expr() : p_(detail::zero_expr().p_) {}
inline Expr::Expr(long v) : Expr(Rational(v)) {}
inline Expr::Expr(const Rational& q) {
  if (q == 0) {
    p_ = detail::zero_expr().p_;
  } else if (q == 1) {
    p_ = detail::one_expr().p_;
  } else {
    p_ = detail::make_number(q).p_;
  }
}

inline NodeKind Expr::kind() const { return p_->kind; }
inline std::size_t Expr::hash() const { return p_->hash; }
inline bool Expr::is_zero() const { return p_->kind == NodeKind::Number && p_->num == 0; }
inline bool Expr::is_one() const { return p_->kind == NodeKind::Number && p_->num == 1; }
inline const Rational& Expr::number() const {
  if (p_->kind != NodeKind::Number) throw SymbolicError("expression is not a number");
  return p_->num;
}
inline const Symbol& Expr::symbol() const {
  if (p_->kind != NodeKind::Sym) throw SymbolicError("expression is not a symbol");
  return p_->sym;
}

// ---- total structural order ----------------------------------------------

int compare(const Expr& a, const Expr& b);

namespace detail {
inline int cmp_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}
}  // namespace detail

inline int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
  switch (x.kind) {
    case NodeKind::Number:
      return detail::cmp_rational(x.num, y.num);
    case NodeKind::Sym: {
      auto c = x.sym <=> y.sym;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case NodeKind::Add:
    case NodeKind::Mul: {
      const std::size_t n = std::min(x.ops.size(), y.ops.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(x.ops[i].first, y.ops[i].first)) return c;
        if (int c = detail::cmp_rational(x.ops[i].second, y.ops[i].second)) return c;
      }
      if (x.ops.size() != y.ops.size()) return x.ops.size() < y.ops.size() ? -1 : 1;
      return detail::cmp_rational(x.num, y.num);
    }
    case NodeKind::Func:
      if (x.fn != y.fn) return x.fn < y.fn ? -1 : 1;
      return compare(x.args[0], y.args[0]);
    case NodeKind::Opaque:
      if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
      if (x.order != y.order) return x.order < y.order ? -1 : 1;
      return compare(x.args[0], y.args[0]);
    case NodeKind::Psi:
      if (x.dim != y.dim) return x.dim < y.dim ? -1 : 1;
      if (x.dx != y.dx) return x.dx < y.dx ? -1 : 1;
      return compare(x.args[0], y.args[0]);
  }
  return 0;
}

inline bool operator==(const Expr& a, const Expr& b) {
  return a.get() == b.get() || (a.hash() == b.hash() && compare(a, b) == 0);
}
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// ---- constructors (declared; defined in construct.hpp) --------------------

Expr sym(const Symbol& s);
Expr add(std::span<const Expr> xs);
Expr mul(std::span<const Expr> xs);
Expr pow(const Expr& base, const Rational& exponent);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& x);
Expr ln(const Expr& x);
Expr sin(const Expr& x);
Expr cos(const Expr& x);
Expr atan(const Expr& x);
Expr opaque(const std::string& name, int order, const Expr& arg);
Expr psi(const Expr& eigenvalue, int dim, std::array<int, 3> dx = {0, 0, 0});

inline Expr operator+(const Expr& a, const Expr& b) {
  const Expr xs[] = {a, b};
  return add(xs);
}
inline Expr operator*(const Expr& a, const Expr& b) {
  const Expr xs[] = {a, b};
  return mul(xs);
}
inline Expr operator-(const Expr& a) { return Expr(-1) * a; }
inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
inline Expr operator/(const Expr& a, const Expr& b) { return a * pow(b, Rational(-1)); }
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

inline Expr rational(long p, long q = 1) { return Expr(Rational(p, q)); }

// Common atoms.
inline Expr t_() { return sym(Symbol::time()); }
inline Expr x_(int i) { return sym(Symbol::space(i)); }
inline Expr u_() { return sym(Symbol::jet(1)); }
inline Expr v_() { return sym(Symbol::jet(2)); }
inline Expr jet(int comp, int nt = 0, std::array<int, 3> nx = {0, 0, 0}) {
  return sym(Symbol::jet(comp, nt, nx));
}
inline Expr R_() { return sym(Symbol::polar_r()); }
inline Expr z_() { return sym(Symbol::polar_z()); }
inline Expr param(const std::string& n) { return sym(Symbol::param(n)); }

}  // namespace rdsym
