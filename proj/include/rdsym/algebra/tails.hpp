#pragma once

// Tails C U d_U + B d_U of the main symmetries as 3x3 matrices acting on
// (1, u, v), their normal forms under U g U^{-1}, and the enumeration of the
// matrix algebras they span.
//
// For type-I A the C block is c I + d J with J the rotation ((0,-1),(1,0)), so a
// tail is an affine map w -> (c + i d) w + (B1 + i B2) of w = u + i v and the
// bracket is [(B, c), (B', c')] = (c B' - c' B, 0).

#include <map>
#include <set>

#include "rdsym/algebra/lie.hpp"

namespace rdsym {

using Mat3 = std::array<std::array<Rational, 3>, 3>;

inline Mat3 mat3_zero() {
  Mat3 z;
  for (auto& r : z) r.fill(Rational(0));
  return z;
}
inline Mat3 mat3_identity() {
  Mat3 z = mat3_zero();
  for (int i = 0; i < 3; ++i) z[i][i] = 1;
  return z;
}
inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 c = mat3_zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}
inline Mat3 operator*(const Rational& s, Mat3 a) {
  for (auto& r : a) {
    for (auto& x : r) x *= s;
  }
  return a;
}
inline Mat3 operator+(Mat3 a, const Mat3& b) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] += b[i][j];
  }
  return a;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) { return a + Rational(-1) * b; }

inline std::string render(const Mat3& a) {
  std::string out = "(";
  for (int i = 0; i < 3; ++i) {
    out += i ? "; " : "";
    for (int j = 0; j < 3; ++j) out += (j ? " " : "") + a[i][j].get_str();
  }
  return out + ")";
}

/// (0 0 0; B1 C11 C12; B2 C21 C22) with C commuting with A: C11 = C22, C12 = -C21.
struct TailMatrix {
  Mat3 g = mat3_zero();

  TailMatrix() = default;
  explicit TailMatrix(const Mat3& m) : g(m) { validate(); }
  /// B = (b1, b2), C = c I + d J
  static TailMatrix from(Rational b1, Rational b2, Rational c, Rational d) {
    Mat3 m = mat3_zero();
    m[1][0] = std::move(b1);
    m[2][0] = std::move(b2);
    m[1][1] = m[2][2] = c;
    m[1][2] = -d;
    m[2][1] = std::move(d);
    return TailMatrix(m);
  }

  Rational b1() const { return g[1][0]; }
  Rational b2() const { return g[2][0]; }
  Rational c() const { return g[1][1]; }
  Rational d() const { return g[2][1]; }
  /// (c, d, B1, B2); row reduction in this order separates the translations
  std::array<Rational, 4> coords() const { return {c(), d(), b1(), b2()}; }
  bool is_zero() const { return b1() == 0 && b2() == 0 && c() == 0 && d() == 0; }

  void validate() const {
    for (int j = 0; j < 3; ++j) {
      if (g[0][j] != 0) throw SymbolicError("tail matrix must have a zero first row");
    }
    if (g[1][1] != g[2][2] || g[1][2] != -g[2][1]) throw SymbolicError("tail block does not commute with A");
  }

  bool operator==(const TailMatrix& o) const { return g == o.g; }
};

inline TailMatrix operator+(const TailMatrix& a, const TailMatrix& b) { return TailMatrix(a.g + b.g); }
inline TailMatrix operator*(const Rational& s, const TailMatrix& a) { return TailMatrix(s * a.g); }
inline TailMatrix bracket(const TailMatrix& a, const TailMatrix& b) { return TailMatrix(a.g * b.g - b.g * a.g); }

inline TailMatrix g1() { return TailMatrix::from(0, 0, 1, 0); }
inline TailMatrix g2() { return TailMatrix::from(1, 0, 0, 0); }
inline TailMatrix g3(const Rational& alpha) { return TailMatrix::from(0, 0, alpha, 1); }
inline TailMatrix g4() { return TailMatrix::from(0, 1, 0, 0); }

/// The operator (g u~)_b d_{u_b}, u~ = (1, u, v). Matrix brackets go over to
/// operator brackets with the opposite sign: [g^, h^] = -[g, h]^.
inline Generator tail_field(const TailMatrix& t, int m) {
  Generator X(m);
  X.pi = {-(Expr(t.b1()) + Expr(t.c()) * u_() - Expr(t.d()) * v_()),
          -(Expr(t.b2()) + Expr(t.d()) * u_() + Expr(t.c()) * v_())};
  X.label = "tail" + render(t.g);
  return X.simplified();
}

/// (1 0 0; b1 K1 K2; b2 -K2 K1), K1^2 + K2^2 != 0.
struct ConjugatorU {
  Rational b1{0}, b2{0}, K1{1}, K2{0};

  Mat3 matrix() const {
    Mat3 u = mat3_zero();
    u[0][0] = 1;
    u[1][0] = b1;
    u[2][0] = b2;
    u[1][1] = K1;
    u[1][2] = K2;
    u[2][1] = -K2;
    u[2][2] = K1;
    return u;
  }
  Mat3 inverse() const {
    const Rational n = K1 * K1 + K2 * K2;
    if (n == 0) throw SymbolicError("conjugator is singular");
    // K^{-1} = (K1 -K2; K2 K1)/n, U^{-1} = (1 0; -K^{-1} b  K^{-1})
    const Rational i11 = K1 / n, i12 = -K2 / n, i21 = K2 / n, i22 = K1 / n;
    Mat3 v = mat3_zero();
    v[0][0] = 1;
    v[1][1] = i11;
    v[1][2] = i12;
    v[2][1] = i21;
    v[2][2] = i22;
    v[1][0] = -(i11 * b1 + i12 * b2);
    v[2][0] = -(i21 * b1 + i22 * b2);
    return v;
  }
  TailMatrix conjugate(const TailMatrix& t) const { return TailMatrix(matrix() * t.g * inverse()); }
};

enum class TailForm { Zero, G1, G2, G3 };

inline const char* to_string(TailForm f) {
  switch (f) {
    case TailForm::Zero:
      return "zero";
    case TailForm::G1:
      return "g1";
    case TailForm::G2:
      return "g2";
    case TailForm::G3:
      return "g3";
  }
  return "?";
}

struct CanonicalTail {
  TailForm form = TailForm::Zero;
  Rational alpha{0};  // g3 only
  Rational scale{1};
  ConjugatorU U;

  TailMatrix matrix() const {
    switch (form) {
      case TailForm::Zero:
        return TailMatrix();
      case TailForm::G1:
        return g1();
      case TailForm::G2:
        return g2();
      case TailForm::G3:
        return g3(alpha);
    }
    return TailMatrix();
  }
  std::string name() const { return form == TailForm::G3 ? "g3(" + alpha.get_str() + ")" : to_string(form); }
};

/// U g U^{-1} = scale * form, checked exactly. Test order: zero, g2, g1, g3.
inline CanonicalTail canonicalize_tail(const TailMatrix& g) {
  g.validate();
  CanonicalTail r;
  const Rational B1 = g.b1(), B2 = g.b2(), c = g.c(), d = g.d();
  if (g.is_zero()) return r;
  if (c == 0 && d == 0) {
    // K B = (1, 0) with K = (K1 K2; -K2 K1)
    const Rational n = B1 * B1 + B2 * B2;
    r.form = TailForm::G2;
    r.U.K1 = B1 / n;
    r.U.K2 = B2 / n;
  } else {
    // C b = B removes the translation part
    const Rational n = c * c + d * d;
    r.U.b1 = (c * B1 + d * B2) / n;
    r.U.b2 = (c * B2 - d * B1) / n;
    if (d == 0) {
      r.form = TailForm::G1;
      r.scale = c;
    } else {
      r.form = TailForm::G3;
      r.scale = d;
      r.alpha = c / d;
    }
  }
  if (!(r.U.conjugate(g) == r.scale * r.matrix())) {
    throw SymbolicError("canonicalize_tail: conjugation check failed for " + render(g.g));
  }
  return r;
}

// ---- algebras of tail matrices ------------------------------------------------

/// Row-reduced basis of a subspace of the 4-dimensional tail space.
struct TailSpace {
  std::vector<std::array<Rational, 4>> rows;

  std::size_t dim() const { return rows.size(); }

  static TailSpace span(const std::vector<TailMatrix>& ts) {
    TailSpace s;
    for (const auto& t : ts) s.rows.push_back(t.coords());
    s.reduce();
    return s;
  }
  std::vector<TailMatrix> basis() const {
    std::vector<TailMatrix> out;
    for (const auto& r : rows) out.push_back(TailMatrix::from(r[2], r[3], r[0], r[1]));
    return out;
  }
  bool contains(const TailMatrix& t) const {
    TailSpace s = *this;
    s.rows.push_back(t.coords());
    s.reduce();
    return s.dim() == dim();
  }
  bool operator==(const TailSpace& o) const { return rows == o.rows; }
  bool operator<(const TailSpace& o) const { return rows < o.rows; }

  void reduce() {
    std::size_t lead = 0;
    std::vector<std::array<Rational, 4>>& m = rows;
    std::size_t r = 0;
    for (; lead < 4 && r < m.size(); ++lead) {
      std::size_t p = r;
      while (p < m.size() && m[p][lead] == 0) ++p;
      if (p == m.size()) continue;
      std::swap(m[p], m[r]);
      const Rational piv = m[r][lead];
      for (auto& x : m[r]) x /= piv;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == r || m[i][lead] == 0) continue;
        const Rational f = m[i][lead];
        for (std::size_t k = 0; k < 4; ++k) m[i][k] -= f * m[r][k];
      }
      ++r;
    }
    m.resize(r);
  }
};

/// Smallest subalgebra containing `ts`.
inline TailSpace closure(const std::vector<TailMatrix>& ts) {
  TailSpace s = TailSpace::span(ts);
  for (bool grew = true; grew;) {
    grew = false;
    const auto b = s.basis();
    for (std::size_t i = 0; i < b.size() && !grew; ++i) {
      for (std::size_t j = i + 1; j < b.size() && !grew; ++j) {
        const TailMatrix c = bracket(b[i], b[j]);
        if (!s.contains(c)) {
          auto all = b;
          all.push_back(c);
          s = TailSpace::span(all);
          grew = true;
        }
      }
    }
  }
  return s;
}

inline TailSpace conjugate(const TailSpace& s, const ConjugatorU& U) {
  std::vector<TailMatrix> out;
  for (const auto& t : s.basis()) out.push_back(U.conjugate(t));
  return TailSpace::span(out);
}

/// Class of a subalgebra under conjugation: canonical basis and the conjugator
/// that carries the subalgebra onto its span.
struct AlgebraClass {
  std::string name;  // A_{k,j}
  std::vector<TailMatrix> basis;
  std::vector<std::string> basis_names;
  std::optional<Rational> alpha;  // the g3 parameter when the class is a family
  ConjugatorU U;
};

namespace detail {

// (b, c) pair of complex numbers as rationals; w = re + i im
struct Cx {
  Rational re{0}, im{0};
};
inline Cx cx_div(const Cx& a, const Cx& b) {
  const Rational n = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

/// U with K = 1 removing the translation part of an element with c + i d != 0.
inline ConjugatorU centering(const TailMatrix& t) {
  const Cx b = cx_div({t.b1(), t.b2()}, {t.c(), t.d()});
  ConjugatorU U;
  U.b1 = b.re;
  U.b2 = b.im;
  return U;
}

/// U with b = 0 and K sending the translation (B1, B2) to (1, 0).
inline ConjugatorU aligning(const TailMatrix& t) {
  const Rational n = t.b1() * t.b1() + t.b2() * t.b2();
  ConjugatorU U;
  U.K1 = t.b1() / n;
  U.K2 = t.b2() / n;
  return U;
}

inline ConjugatorU compose(const ConjugatorU& second, const ConjugatorU& first) {
  const Mat3 m = second.matrix() * first.matrix();
  return {m[1][0], m[2][0], m[1][1], m[1][2]};
}

}  // namespace detail

/// Classifies a subalgebra of dimension 2, 3 or 4 and verifies the conjugation.
inline AlgebraClass classify_algebra(const TailSpace& h) {
  const auto b = h.basis();
  // linear part pi(h) and translation part h ∩ {c = d = 0}
  std::vector<TailMatrix> lin, trans;
  for (const auto& t : b) {
    if (t.c() == 0 && t.d() == 0) trans.push_back(t);
    else lin.push_back(t);
  }
  AlgebraClass k;
  const std::size_t p = lin.size(), q = trans.size();
  if (p == 0 && q == 2) {
    k = {"A_{2,2}", {g2(), g4()}, {"g2", "g4"}, std::nullopt, {}};
  } else if (p == 2 && q == 0) {
    // graph of w -> beta w; the element with c = 1, d = 0 fixes beta
    TailMatrix e;
    for (const auto& t : lin) {
      if (t.c() == 1 && t.d() == 0) e = t;
    }
    k = {"A_{2,1}", {g1(), g3(0)}, {"g1", "g3"}, std::nullopt, detail::centering(e)};
  } else if (p == 1 && q == 1) {
    if (lin[0].d() != 0) throw SymbolicError("not a subalgebra");
    const ConjugatorU c = detail::centering(lin[0]);
    const ConjugatorU a = detail::aligning(c.conjugate(trans[0]));
    k = {"A_{2,3}", {g1(), g2()}, {"g1", "g2"}, std::nullopt, detail::compose(a, c)};
  } else if (p == 1 && q == 2) {
    const ConjugatorU c = detail::centering(lin[0]);
    if (lin[0].d() == 0) {
      k = {"A_{3,1}", {g1(), g2(), g4()}, {"g1", "g2", "g4"}, std::nullopt, c};
    } else {
      const Rational alpha = lin[0].c() / lin[0].d();
      k = {"A_{3,2}", {g2(), g3(alpha), g4()}, {"g2", "g3", "g4"}, alpha, c};
    }
  } else if (p == 2 && q == 2) {
    k = {"A_{4,1}", {g1(), g3(0), g4(), g2()}, {"g1", "g3", "g4", "g2"}, std::nullopt, {}};
  } else {
    throw SymbolicError("unexpected subalgebra shape (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  }
  if (!(conjugate(h, k.U) == TailSpace::span(k.basis))) {
    throw SymbolicError("classify_algebra: conjugation check failed for " + k.name);
  }
  return k;
}

class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
  std::vector<Rational> grid{Rational(-1), Rational(0), Rational(1), Rational(2)};
  std::vector<Rational> alphas{Rational(0), Rational(1), Rational(-1, 2), Rational(3)};
  std::size_t budget = 200000;  // closures
};

struct AlgebraFamily {
  AlgebraClass cls;
  std::set<Rational> alphas;  // values of the g3 parameter met in the search
  std::size_t found = 0;      // distinct subalgebras in the class
};

struct Enumeration {
  int dim = 0;
  std::vector<AlgebraFamily> classes;
  std::size_t closures = 0, subalgebras = 0;
};

/// Grows subalgebras from each canonical element by adjoining grid elements and
/// closing, then groups those of dimension `dim` into conjugacy classes.
inline Enumeration enumerate_algebras(int dim, const EnumerationOptions& opt = {}) {
  if (dim < 2 || dim > 4) throw SymbolicError("enumerate_algebras: dim must be 2, 3 or 4");
  std::vector<TailMatrix> grid;
  for (const auto& a : opt.grid) {
    for (const auto& b : opt.grid) {
      for (const auto& c : opt.grid) {
        for (const auto& d : opt.grid) {
          const auto t = TailMatrix::from(a, b, c, d);
          if (!t.is_zero()) grid.push_back(t);
        }
      }
    }
  }
  std::vector<TailMatrix> seeds{g1(), g2()};
  for (const auto& a : opt.alphas) seeds.push_back(g3(a));
  Enumeration out;
  out.dim = dim;
  std::set<TailSpace> seen, frontier;
  for (const auto& s : seeds) frontier.insert(closure({s}));
  seen = frontier;
  for (int level = 1; level < dim && !frontier.empty(); ++level) {
    std::set<TailSpace> next;
    for (const auto& h : frontier) {
      for (const auto& g : grid) {
        if (h.contains(g)) continue;
        if (++out.closures > opt.budget) {
          throw SearchBudgetExceeded("enumerate_algebras: more than " + std::to_string(opt.budget) + " closures");
        }
        auto b = h.basis();
        b.push_back(g);
        TailSpace c = closure(b);
        if (c.dim() <= static_cast<std::size_t>(dim) && seen.insert(c).second) next.insert(std::move(c));
      }
    }
    frontier = std::move(next);
  }
  std::map<std::string, AlgebraFamily> classes;
  for (const auto& h : seen) {
    if (h.dim() != static_cast<std::size_t>(dim)) continue;
    ++out.subalgebras;
    const AlgebraClass k = classify_algebra(h);
    auto [it, fresh] = classes.try_emplace(k.name, AlgebraFamily{k, {}, 0});
    ++it->second.found;
    if (k.alpha) it->second.alphas.insert(*k.alpha);
  }
  for (auto& [n, f] : classes) out.classes.push_back(std::move(f));
  return out;
}

/// Structure constants of a matrix basis: [e_i, e_j] = sum_k c[i][j][k] e_k.
inline std::optional<std::vector<std::vector<std::vector<Rational>>>> structure_constants(
    const std::vector<TailMatrix>& basis) {
  const std::size_t n = basis.size();
  std::vector<std::vector<std::vector<Rational>>> c(n, std::vector<std::vector<Rational>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto target = bracket(basis[i], basis[j]).coords();
      // solve sum_k x_k coords(e_k) = target by elimination on the augmented system
      std::vector<std::array<Rational, 4>> cols;
      for (const auto& b : basis) cols.push_back(b.coords());
      std::vector<std::vector<Rational>> a(4, std::vector<Rational>(n + 1));
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t k = 0; k < n; ++k) a[r][k] = cols[k][r];
        a[r][n] = target[r];
      }
      std::vector<std::size_t> pivcol;
      std::size_t row = 0;
      for (std::size_t col = 0; col < n && row < 4; ++col) {
        std::size_t p = row;
        while (p < 4 && a[p][col] == 0) ++p;
        if (p == 4) continue;
        std::swap(a[p], a[row]);
        const Rational piv = a[row][col];
        for (auto& x : a[row]) x /= piv;
        for (std::size_t r = 0; r < 4; ++r) {
          if (r == row || a[r][col] == 0) continue;
          const Rational f = a[r][col];
          for (std::size_t k = 0; k <= n; ++k) a[r][k] -= f * a[row][k];
        }
        pivcol.push_back(col);
        ++row;
      }
      for (std::size_t r = row; r < 4; ++r) {
        if (a[r][n] != 0) return std::nullopt;
      }
      c[i][j].assign(n, Rational(0));
      for (std::size_t r = 0; r < pivcol.size(); ++r) c[i][j][pivcol[r]] = a[r][n];
    }
  }
  return c;
}

}  // namespace rdsym
