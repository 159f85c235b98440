#pragma once

// Two-component reaction-diffusion systems U_t - A Delta U = f(U) with the
// type-I diffusion matrix A = ((a, -1), (1, a)).

#include <array>
#include <string>

#include <nlohmann/json.hpp>

#include "rdsym/expr.hpp"

namespace rdsym {

using Vec2 = std::array<Expr, 2>;

/// 2x2 matrix of expressions, row-major.
struct Mat2 {
  std::array<Expr, 4> e{};

  Mat2() = default;
  Mat2(Expr a11, Expr a12, Expr a21, Expr a22) : e{std::move(a11), std::move(a12), std::move(a21), std::move(a22)} {}

  const Expr& operator()(int i, int j) const { return e[static_cast<std::size_t>(2 * i + j)]; }
  Expr& operator()(int i, int j) { return e[static_cast<std::size_t>(2 * i + j)]; }

  static Mat2 identity() { return {1, 0, 0, 1}; }
  /// rotation generator ((0, -1), (1, 0))
  static Mat2 J() { return {0, -1, 1, 0}; }

  Mat2 map(const std::function<Expr(const Expr&)>& g) const { return {g(e[0]), g(e[1]), g(e[2]), g(e[3])}; }
  bool proven_zero() const {
    for (const auto& x : e) {
      if (!rdsym::proven_zero(x)) return false;
    }
    return true;
  }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
}
inline Mat2 operator*(const Expr& s, const Mat2& a) { return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}; }
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  }
  return c;
}
inline Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(const Expr& s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

inline Vec2 U_() { return {u_(), v_()}; }

enum class MatrixKind { TypeI };

class DiffusionMatrix {
 public:
  explicit DiffusionMatrix(Expr a = Expr(0)) : a_(std::move(a)) {}

  MatrixKind kind() const { return MatrixKind::TypeI; }
  const Expr& a() const { return a_; }
  Mat2 matrix() const { return {a_, -1, 1, a_}; }
  /// (1/(a^2+1)) ((a, 1), (-1, a)); det A = a^2 + 1 > 0 for real a
  Mat2 inverse() const {
    Expr d = Expr(1) / (a_ * a_ + 1);
    return d * Mat2(a_, 1, -1, a_);
  }

 private:
  Expr a_;
};

/// Spatial Laplacian of component `comp` (1 or 2) as a sum of second jets.
inline Expr laplacian_jet(int comp, int m) {
  std::vector<Expr> parts;
  for (int i = 0; i < m; ++i) {
    std::array<int, 3> nx{0, 0, 0};
    nx[static_cast<std::size_t>(i)] = 2;
    parts.push_back(jet(comp, 0, nx));
  }
  return sum(parts);
}

struct RDSystem {
  int m = 1;
  DiffusionMatrix A;
  Vec2 f{Expr(0), Expr(0)};

  RDSystem() = default;
  RDSystem(int dim, DiffusionMatrix a, Vec2 source) : m(dim), A(std::move(a)), f(std::move(source)) { validate(); }

  void validate() const {
    if (m < 1 || m > 3) throw SymbolicError("spatial dimension must be 1, 2 or 3");
    for (const auto& fb : f) {
      for (const Symbol& s : free_symbols(fb)) {
        const bool ok = (s.is_jet() && s.jet_order() == 0) || s.kind == SymbolKind::PolarR ||
                        s.kind == SymbolKind::PolarZ || s.kind == SymbolKind::Param ||
                        s.kind == SymbolKind::Placeholder;
        if (!ok) throw SymbolicError("source terms may depend on u and v only");
      }
    }
  }

  /// A Delta U + f, the right-hand side of U_t = ...
  Vec2 rhs() const {
    const Vec2 lap{laplacian_jet(1, m), laplacian_jet(2, m)};
    return A.matrix() * lap + f;
  }
};

/// (u_t - a Delta u + Delta v - f1, v_t - a Delta v - Delta u - f2)
inline Vec2 residual(const RDSystem& sys) {
  const Vec2 r = sys.rhs();
  return {jet(1, 1) - r[0], jet(2, 1) - r[1]};
}

/// u_{b,t} -> (A Delta U + f)_b and u_{b,t x_i} -> D_{x_i} of that rule. The
/// latter introduce third-order jets, which only the prolongation pipeline sees.
inline Substitution solution_manifold_rules(const RDSystem& sys) {
  Substitution s;
  const Vec2 r = sys.rhs();
  for (int b = 1; b <= 2; ++b) {
    const Expr& rb = r[static_cast<std::size_t>(b - 1)];
    s.bind(Symbol::jet(b, 1), rb);
    for (int i = 1; i <= sys.m; ++i) {
      std::array<int, 3> nx{0, 0, 0};
      nx[static_cast<std::size_t>(i - 1)] = 1;
      s.bind(Symbol::jet(b, 1, nx), total_derivative(rb, Symbol::space(i), 3));
    }
  }
  return s;
}

// ---- complex form W = u + i v ----------------------------------------------

struct Complex {
  Expr re{0}, im{0};

  static Complex W() { return {u_(), v_()}; }
  static Complex i() { return {0, 1}; }
  Complex conj() const { return {re, -im}; }
  Expr norm2() const { return re * re + im * im; }
  Vec2 split() const { return {re, im}; }
};

inline Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(const Expr& s, const Complex& a) { return {s * a.re, s * a.im}; }

/// exp(x + i y)
inline Complex cexp(const Expr& x, const Expr& y) { return {exp(x) * cos(y), exp(x) * sin(y)}; }

/// Source of the standard CGL equation: W - (1 + i alpha) W |W|^2.
inline Vec2 cgl_source(const Expr& alpha) {
  const Complex w = Complex::W();
  return (w - (Complex{1, alpha} * w) * Complex{w.norm2(), 0}).split();
}

// ---- descriptor -------------------------------------------------------------

/// Adds the dimension-dependent macros `m` and `xsq` (= x_1^2 + ... + x_m^2).
inline ParseContext with_space_macros(ParseContext ctx, int m) {
  ctx.dim = m;
  ctx.macros["m"] = Expr(m);
  std::vector<Expr> sq;
  for (int i = 1; i <= m; ++i) sq.push_back(x_(i) * x_(i));
  ctx.macros["xsq"] = sum(sq);
  return ctx;
}

/// {"m": 2, "a": "1", "f1": "...", "f2": "...", "params": ["alpha"]}
inline RDSystem system_from_json(const nlohmann::json& j, ParseContext ctx = {}) {
  if (j.contains("params")) {
    for (const auto& p : j.at("params")) ctx.params.insert(p.get<std::string>());
  }
  const int m = j.at("m").get<int>();
  ctx = with_space_macros(std::move(ctx), m);
  auto field = [&](const char* k) {
    const auto& v = j.at(k);
    return v.is_string() ? parse(v.get<std::string>(), ctx) : parse(v.dump(), ctx);
  };
  return RDSystem(m, DiffusionMatrix(field("a")), {field("f1"), field("f2")});
}

inline nlohmann::json system_to_json(const RDSystem& sys) {
  return {{"m", sys.m}, {"a", render(sys.A.a())}, {"f1", render(sys.f[0])}, {"f2", render(sys.f[1])}};
}

}  // namespace rdsym
