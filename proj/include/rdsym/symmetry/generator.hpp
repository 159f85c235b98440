#pragma once

// Point-symmetry generators X = eta d_t + xi^nu d_{x_nu} - pi^b d_{u_b} with
// pi affine in U, and the template family they are drawn from.

#include <optional>
#include <string>
#include <vector>

#include "rdsym/pde/model.hpp"

namespace rdsym {

struct Generator {
  int m = 1;
  Expr eta{0};
  std::vector<Expr> xi;
  Vec2 pi{Expr(0), Expr(0)};
  std::string label;

  Generator() = default;
  explicit Generator(int dim) : m(dim), xi(static_cast<std::size_t>(dim), Expr(0)) {}

  /// N^{ab} = d pi^a / d u_b
  Mat2 N() const {
    return {diff(pi[0], Symbol::jet(1)), diff(pi[0], Symbol::jet(2)), diff(pi[1], Symbol::jet(1)),
            diff(pi[1], Symbol::jet(2))};
  }
  /// B = pi - N U
  Vec2 B() const {
    const Vec2 r = pi - N() * U_();
    return {simplify(r[0]), simplify(r[1])};
  }

  /// Throws when eta, xi depend on U or pi is not affine in U.
  void validate() const {
    if (xi.size() != static_cast<std::size_t>(m)) throw SymbolicError("generator has wrong number of xi components");
    auto no_u = [](const Expr& e) {
      for (const Symbol& s : free_symbols(e)) {
        if (s.is_jet() || s.kind == SymbolKind::PolarR || s.kind == SymbolKind::PolarZ) return false;
      }
      return true;
    };
    if (!no_u(eta)) throw SymbolicError("eta must not depend on u, v");
    for (const auto& x : xi) {
      if (!no_u(x)) throw SymbolicError("xi must not depend on u, v");
    }
    const Mat2 n = N();
    for (const auto& c : n.e) {
      if (!no_u(simplify(c))) throw SymbolicError("pi must be affine in (u, v)");
    }
  }

  Generator& operator+=(const Generator& o) {
    eta += o.eta;
    for (int i = 0; i < m; ++i) xi[static_cast<std::size_t>(i)] += o.xi[static_cast<std::size_t>(i)];
    pi = pi + o.pi;
    return *this;
  }

  Generator scaled(const Expr& c) const {
    Generator g = *this;
    g.eta = c * eta;
    for (auto& x : g.xi) x = c * x;
    g.pi = c * pi;
    return g;
  }

  Generator simplified() const {
    Generator g = *this;
    g.eta = simplify(eta);
    for (auto& x : g.xi) x = simplify(x);
    g.pi = {simplify(pi[0]), simplify(pi[1])};
    return g;
  }

  bool is_zero() const {
    if (!proven_zero(eta) || !proven_zero(pi[0]) || !proven_zero(pi[1])) return false;
    for (const auto& x : xi) {
      if (!proven_zero(x)) return false;
    }
    return true;
  }
};

inline Generator operator+(Generator a, const Generator& b) { return a += b; }
inline Generator operator-(const Generator& a, const Generator& b) { return a + b.scaled(Expr(-1)); }

/// Sign used for the U-multiplier of the Galilei boosts. `Standard` is the one
/// that satisfies the determining equations; `Flipped` has the opposite sign.
enum class GalileiSign { Standard, Flipped };

// ---- named generators --------------------------------------------------------

inline Generator P0(int m) {
  Generator g(m);
  g.eta = 1;
  g.label = "P0";
  return g;
}

inline Generator P(int m, int mu) {
  Generator g(m);
  g.xi[static_cast<std::size_t>(mu - 1)] = 1;
  g.label = "P" + std::to_string(mu);
  return g;
}

/// J_{mu nu} = x_mu d_{x_nu} - x_nu d_{x_mu}
inline Generator Jrot(int m, int mu, int nu) {
  Generator g(m);
  g.xi[static_cast<std::size_t>(nu - 1)] = x_(mu);
  g.xi[static_cast<std::size_t>(mu - 1)] = -x_(nu);
  g.label = "J" + std::to_string(mu) + std::to_string(nu);
  return g;
}

/// D = t d_t + x/2 d_x
inline Generator Dil(int m) {
  Generator g(m);
  g.eta = t_();
  for (int i = 0; i < m; ++i) g.xi[static_cast<std::size_t>(i)] = rational(1, 2) * x_(i + 1);
  g.label = "D";
  return g;
}

inline Expr xsq(int m) {
  std::vector<Expr> parts;
  for (int i = 1; i <= m; ++i) parts.push_back(x_(i) * x_(i));
  return sum(parts);
}

/// Tail -(C U + B) d_U, stored as pi = C U + B.
inline Generator Tail(int m, const Mat2& C, const Vec2& B) {
  Generator g(m);
  g.pi = C * U_() + B;
  return g;
}

/// K = 2t(t d_t + x d_x) - (x^2/2 A^{-1} U + t m U) d_U
inline Generator Conf(int m, const DiffusionMatrix& A) {
  Generator g(m);
  g.eta = 2 * t_() * t_();
  for (int i = 0; i < m; ++i) g.xi[static_cast<std::size_t>(i)] = 2 * t_() * x_(i + 1);
  const Mat2 N = rational(1, 2) * xsq(m) * A.inverse() + Expr(t_() * Expr(m)) * Mat2::identity();
  g.pi = N * U_();
  g.label = "K";
  return g;
}

/// G_mu = t d_{x_mu} - x_mu/2 A^{-1} U d_U
inline Generator Gal(int m, int mu, const DiffusionMatrix& A, GalileiSign s = GalileiSign::Standard) {
  Generator g(m);
  g.xi[static_cast<std::size_t>(mu - 1)] = t_();
  const Expr c = s == GalileiSign::Standard ? rational(1, 2) : rational(-1, 2);
  g.pi = (c * x_(mu)) * (A.inverse() * U_());
  g.label = "G" + std::to_string(mu);
  return g;
}

/// Ghat_mu = e^{gamma t}(d_{x_mu} - gamma x_mu/2 A^{-1} U d_U)
inline Generator GalExp(int m, int mu, const Expr& gamma, const DiffusionMatrix& A,
                        GalileiSign s = GalileiSign::Standard) {
  Generator g(m);
  const Expr e = exp(gamma * t_());
  g.xi[static_cast<std::size_t>(mu - 1)] = e;
  const Expr c = s == GalileiSign::Standard ? rational(1, 2) : rational(-1, 2);
  g.pi = (c * gamma * x_(mu) * e) * (A.inverse() * U_());
  g.label = "Ghat" + std::to_string(mu);
  return g;
}

/// Parameters of the general generator family; zero entries are absent terms.
struct GeneratorTemplate {
  int m = 1;
  Expr lambda{0};
  std::vector<Expr> sigma;  // Galilei
  std::vector<Expr> omega;  // exponential Galilei
  Expr gamma{0};
  Expr mu{0};  // dilatation
  Mat2 C{0, 0, 0, 0};
  Vec2 B{Expr(0), Expr(0)};
  std::vector<std::vector<Expr>> Psi;  // rotations, Psi[mu][nu] multiplies x_mu d_{x_nu}
  Expr nu{0};                         // time translation
  std::vector<Expr> rho;              // space translations

  explicit GeneratorTemplate(int dim = 1)
      : m(dim),
        sigma(static_cast<std::size_t>(dim), Expr(0)),
        omega(static_cast<std::size_t>(dim), Expr(0)),
        Psi(static_cast<std::size_t>(dim), std::vector<Expr>(static_cast<std::size_t>(dim), Expr(0))),
        rho(static_cast<std::size_t>(dim), Expr(0)) {}

  /// [C, A] = 0, i.e. C11 = C22 and C12 = -C21 for type-I A.
  bool tail_commutes(const DiffusionMatrix& A) const { return commutator(C, A.matrix()).proven_zero(); }

  Generator expand(const DiffusionMatrix& A, GalileiSign s = GalileiSign::Standard) const {
    Generator g(m);
    g += Conf(m, A).scaled(lambda);
    for (int i = 1; i <= m; ++i) {
      g += Gal(m, i, A, s).scaled(sigma[static_cast<std::size_t>(i - 1)]);
      if (!omega[static_cast<std::size_t>(i - 1)].is_zero()) {
        g += GalExp(m, i, gamma, A, s).scaled(omega[static_cast<std::size_t>(i - 1)]);
      }
      g += P(m, i).scaled(rho[static_cast<std::size_t>(i - 1)]);
      for (int j = 1; j <= m; ++j) {
        Generator r(m);
        r.xi[static_cast<std::size_t>(j - 1)] = x_(i);
        g += r.scaled(Psi[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
      }
    }
    g += Dil(m).scaled(mu);
    g += Tail(m, C, B);
    g += P0(m).scaled(nu);
    g.label.clear();
    return g.simplified();
  }
};

}  // namespace rdsym
