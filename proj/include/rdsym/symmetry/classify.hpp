#pragma once

// Reduced determining equations: the classifying equation for the template
// family, the structure equations for eta, xi, N, and the extension flags.

#include <optional>
#include <string>

#include "rdsym/symmetry/prolong.hpp"

namespace rdsym {

/// grad f applied to w: sum_s w_s d f_a / d u_s
inline Vec2 directional(const Vec2& f, const Vec2& w) {
  Vec2 out;
  for (std::size_t a = 0; a < 2; ++a) {
    out[a] = w[0] * diff(f[a], Symbol::jet(1)) + w[1] * diff(f[a], Symbol::jet(2));
  }
  return out;
}

inline Expr laplacian(const Expr& e, int m) {
  std::vector<Expr> parts;
  for (int i = 1; i <= m; ++i) parts.push_back(diff(diff(e, Symbol::space(i)), Symbol::space(i)));
  return sum(parts);
}

/// Left minus right side of
///   eta_t f + N f + (N_t - A Delta N) U + B_t - A Delta B = (N U + B) . grad f
/// for an arbitrary generator with affine pi.
inline Vec2 classifying_general(const RDSystem& sys, const Generator& X) {
  const Mat2 N = X.N();
  const Vec2 B = X.B();
  const Mat2 A = sys.A.matrix();
  const int m = sys.m;
  const Expr eta_t = diff(X.eta, Symbol::time());
  const Mat2 Nt = N.map([](const Expr& e) { return diff(e, Symbol::time()); });
  const Mat2 LapN = N.map([m](const Expr& e) { return laplacian(e, m); });
  const Vec2 Bt{diff(B[0], Symbol::time()), diff(B[1], Symbol::time())};
  const Vec2 LapB{laplacian(B[0], m), laplacian(B[1], m)};
  const Vec2 lhs = eta_t * sys.f + N * sys.f + (Nt - A * LapN) * U_() + Bt - A * LapB;
  const Vec2 rhs = directional(sys.f, N * U_() + B);
  const Vec2 d = lhs - rhs;
  return {simplify(d[0]), simplify(d[1])};
}

/// Left minus right side of the classifying equation written in the template
/// parameters. With Q = lambda x^2/2 + sigma.x/2 + gamma e^{gamma t} omega.x/2:
///   (lambda t(m+4) + mu) f + Q A^{-1} f + C f + C_t U + gamma^2/2 e^{gamma t}(omega.x) A^{-1} U
///     + B_t - A Delta B = (B + C U + lambda m t U + Q A^{-1} U) . grad f
inline Vec2 classifying_template(const RDSystem& sys, const GeneratorTemplate& T) {
  const int m = sys.m;
  const Mat2 A = sys.A.matrix();
  const Mat2 Ai = sys.A.inverse();
  const Vec2 U = U_();
  const Vec2& f = sys.f;
  const Expr t = t_();
  std::vector<Expr> sx, wx;
  for (int i = 1; i <= m; ++i) {
    sx.push_back(T.sigma[static_cast<std::size_t>(i - 1)] * x_(i));
    wx.push_back(T.omega[static_cast<std::size_t>(i - 1)] * x_(i));
  }
  const Expr sigma_x = sum(sx), omega_x = sum(wx);
  const Expr egt = exp(T.gamma * t);
  const Expr Q = rational(1, 2) * T.lambda * xsq(m) + rational(1, 2) * sigma_x + rational(1, 2) * T.gamma * egt * omega_x;
  const Mat2 Ct = T.C.map([](const Expr& e) { return diff(e, Symbol::time()); });
  const Vec2 Bt{diff(T.B[0], Symbol::time()), diff(T.B[1], Symbol::time())};
  const Vec2 LapB{laplacian(T.B[0], m), laplacian(T.B[1], m)};
  const Vec2 lhs = (T.lambda * t * Expr(m + 4) + T.mu) * f + Q * (Ai * f) + T.C * f + Ct * U +
                   (rational(1, 2) * T.gamma * T.gamma * egt * omega_x) * (Ai * U) + Bt - A * LapB;
  const Vec2 w = T.B + T.C * U + (T.lambda * Expr(m) * t) * U + Q * (Ai * U);
  const Vec2 d = lhs - directional(f, w);
  return {simplify(d[0]), simplify(d[1])};
}

inline PairVerdict check_classifying(const RDSystem& sys, const GeneratorTemplate& T,
                                     const ZeroTestOptions& opt = {}) {
  return verdict(classifying_template(sys, T), opt);
}

struct NamedVerdict {
  std::string equation;
  ZeroVerdict verdict;
};

struct StructureReport {
  std::vector<NamedVerdict> checks;
  bool ok() const {
    for (const auto& c : checks) {
      if (!c.verdict.zero()) return false;
    }
    return true;
  }
};

/// A(xi^nu_{x_mu} + xi^mu_{x_nu}) = delta^{mu nu}(eta_t A - [A, N]),  eta_{x_nu t} = 0,
/// xi^nu_t - 2 A N_{x_nu} - A Delta xi^nu = 0.
inline StructureReport check_structure(const Generator& X, const DiffusionMatrix& Adm,
                                       const ZeroTestOptions& opt = {}) {
  StructureReport rep;
  const Mat2 A = Adm.matrix();
  const Mat2 N = X.N();
  const int m = X.m;
  const Expr eta_t = diff(X.eta, Symbol::time());
  const Mat2 AN = commutator(A, N);
  auto record = [&](const std::string& name, const Mat2& M) {
    ZeroVerdict worst;
    for (const auto& e : M.e) {
      ZeroVerdict v = is_zero(e, opt);
      if (!v.zero()) {
        worst = v;
        break;
      }
      if (v.kind == ZeroKind::NumericallyZero) worst = v;
    }
    rep.checks.push_back({name, worst});
  };
  auto xi = [&](int i) { return X.xi[static_cast<std::size_t>(i - 1)]; };
  for (int mu = 1; mu <= m; ++mu) {
    for (int nu = mu; nu <= m; ++nu) {
      const Expr sym_grad = diff(xi(nu), Symbol::space(mu)) + diff(xi(mu), Symbol::space(nu));
      Mat2 M = sym_grad * A;
      if (mu == nu) M = M - (eta_t * A - AN);
      record("xi_x[" + std::to_string(mu) + "," + std::to_string(nu) + "]", M);
    }
  }
  for (int nu = 1; nu <= m; ++nu) {
    const Expr e = diff(diff(X.eta, Symbol::space(nu)), Symbol::time());
    record("eta_xt[" + std::to_string(nu) + "]", Mat2(e, 0, 0, 0));
  }
  for (int nu = 1; nu <= m; ++nu) {
    const Mat2 Nx = N.map([nu](const Expr& e) { return diff(e, Symbol::space(nu)); });
    const Mat2 M = diff(xi(nu), Symbol::time()) * Mat2::identity() - Expr(2) * (A * Nx) -
                   laplacian(xi(nu), m) * A;
    record("xi_t[" + std::to_string(nu) + "]", M);
  }
  return rep;
}

struct ExtensionFlags {
  bool galilei = false;
  std::optional<Expr> gamma;  // exponential Galilei exponent when it exists
  bool conformal = false;
  PairVerdict galilei_verdict;
};

/// A^{-1} f - (A^{-1} U) . grad f
inline Vec2 galilei_condition(const RDSystem& sys) {
  const Mat2 Ai = sys.A.inverse();
  const Vec2 d = Ai * sys.f - directional(sys.f, Ai * U_());
  return {simplify(d[0]), simplify(d[1])};
}

/// (m+4) f - m U . grad f
inline Vec2 conformal_condition(const RDSystem& sys) {
  const Vec2 d = Expr(sys.m + 4) * sys.f - directional(sys.f, Expr(sys.m) * U_());
  return {simplify(d[0]), simplify(d[1])};
}

/// Solves A^{-1}(f + gamma U) = (A^{-1} U) . grad f for a constant gamma != 0.
inline std::optional<Expr> exp_galilei_gamma(const RDSystem& sys, const ZeroTestOptions& opt = {}) {
  const Vec2 E0 = galilei_condition(sys);
  const Vec2 AE = sys.A.matrix() * E0;
  const Expr cand = simplify(-AE[0] / u_());
  for (const Symbol& s : {Symbol::jet(1), Symbol::jet(2)}) {
    if (!is_zero(diff(cand, s), opt).zero()) return std::nullopt;
  }
  if (is_zero(cand, opt).zero()) return std::nullopt;
  const Vec2 rest = E0 + cand * (sys.A.inverse() * U_());
  if (!verdict(rest, opt).zero()) return std::nullopt;
  if (auto q = constant_value(cand, opt)) return Expr(*q);
  return cand;
}

inline ExtensionFlags extension_conditions(const RDSystem& sys, const ZeroTestOptions& opt = {}) {
  ExtensionFlags fl;
  fl.galilei_verdict = verdict(galilei_condition(sys), opt);
  fl.galilei = fl.galilei_verdict.zero();
  fl.gamma = exp_galilei_gamma(sys, opt);
  fl.conformal = fl.galilei && verdict(conformal_condition(sys), opt).zero();
  return fl;
}

/// A^{-1} U d_U written as a generator (pi = -A^{-1} U), admitted whenever galilei holds.
inline Generator Ainv_field(int m, const DiffusionMatrix& A, const Expr& factor = Expr(1)) {
  Generator g(m);
  g.pi = factor * (A.inverse() * U_());
  g.pi = {-g.pi[0], -g.pi[1]};
  g.label = "Ainv";
  return g;
}

}  // namespace rdsym
