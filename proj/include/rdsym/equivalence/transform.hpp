#pragma once

// Equivalence transformations of U_t - A Delta U = f(U): the kernel group, the
// linear transformations commuting with A, and the additional equivalence
// transformations valid for special sources only.
//
// All of them are point maps of the shape
//   t' = alpha t + tau,  x' = s Q x + d,  U' = M(t) U + c(t)
// with Q orthogonal.

#include <optional>
#include <sstream>

#include "rdsym/symmetry/classify.hpp"

namespace rdsym {

class FormNotPreserved : public SymbolicError {
 public:
  FormNotPreserved(const std::string& what, Expr term) : SymbolicError("form not preserved: " + what), term_(std::move(term)) {}
  const Expr& term() const { return term_; }

 private:
  Expr term_;
};

enum class TransformKind { Kernel, Linear, AET };

/// One factor of an AET chain; parameters nu, sigma, lambda as in the list of AETs.
struct AetStep {
  int id = 1;
  Expr omega{1};
  Expr nu{1}, sigma{1}, lambda{1};
};

struct EquivTransform {
  TransformKind kind = TransformKind::Linear;
  // kernel
  Rational time_shift{0};
  std::vector<std::vector<Rational>> rotation;  // m x m, empty means identity
  std::vector<Rational> space_shift;
  // linear
  Rational K1{1}, K2{0}, scale{1};
  std::array<Rational, 2> b{Rational(0), Rational(0)};
  // aet, applied left to right
  std::vector<AetStep> steps;

  static EquivTransform kernel(Rational a, std::vector<std::vector<Rational>> R, std::vector<Rational> shift) {
    EquivTransform T;
    T.kind = TransformKind::Kernel;
    T.time_shift = std::move(a);
    T.rotation = std::move(R);
    T.space_shift = std::move(shift);
    return T;
  }
  static EquivTransform linear(Rational k1, Rational k2, Rational lambda, std::array<Rational, 2> shift) {
    EquivTransform T;
    T.kind = TransformKind::Linear;
    T.K1 = std::move(k1);
    T.K2 = std::move(k2);
    T.scale = std::move(lambda);
    T.b = std::move(shift);
    return T;
  }
  static EquivTransform aet(std::vector<AetStep> steps) {
    EquivTransform T;
    T.kind = TransformKind::AET;
    T.steps = std::move(steps);
    return T;
  }

  /// Throws SymbolicError when the parameters violate the invariants.
  void validate(int m) const {
    if (kind == TransformKind::Kernel) {
      if (!rotation.empty()) {
        if (rotation.size() != static_cast<std::size_t>(m)) throw SymbolicError("rotation has wrong size");
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            Rational s = 0;
            for (int k = 0; k < m; ++k) s += rotation[k][i] * rotation[k][j];
            if (s != (i == j ? 1 : 0)) throw SymbolicError("rotation matrix is not orthogonal");
          }
        }
      }
      if (!space_shift.empty() && space_shift.size() != static_cast<std::size_t>(m)) {
        throw SymbolicError("space shift has wrong size");
      }
    }
    if (kind == TransformKind::Linear) {
      if (K1 * K1 + K2 * K2 == 0) throw SymbolicError("K must be invertible");
      if (scale == 0) throw SymbolicError("scale must be nonzero");
    }
    if (kind == TransformKind::AET) {
      if (steps.empty()) throw SymbolicError("empty AET chain");
      for (const auto& s : steps) {
        if (s.id < 1 || s.id > 8) throw SymbolicError("AET id must be 1..8");
      }
    }
  }
};

/// U' = M(t) U + c(t) in the original time t.
struct AffineAction {
  Mat2 M = Mat2::identity();
  Vec2 c{Expr(0), Expr(0)};
};

namespace detail {

inline Mat2 rot(const Expr& theta) { return {cos(theta), -sin(theta), sin(theta), cos(theta)}; }

inline AffineAction aet_action(const AetStep& s) {
  const Expr t = t_(), w = s.omega;
  AffineAction a;
  switch (s.id) {
    case 1:
      a.M = exp(w * t) * Mat2::identity();
      break;
    case 2:
      a.M = rot(w * t);
      break;
    case 3:
      a.M = Mat2(exp(w * t), 0, 0, 1);
      a.c = {Expr(0), w * t * t * rational(1, 2)};
      break;
    case 4:
      a.c = {w * t, Expr(0)};
      break;
    case 5:
      a.c = {Expr(0), w * t};
      break;
    case 6:
      a.M = exp(s.nu * w * t) * rot(-s.sigma * w * t);
      break;
    case 7:
      a.M = exp(2 * w * t) * rot(s.sigma * w * t * t);
      break;
    case 8:
      a.M = exp(s.lambda * w * t * t) * rot(-2 * w * t);
      break;
    default:
      throw SymbolicError("unknown AET id");
  }
  return a;
}

inline Mat2 inverse(const Mat2& M) {
  const Expr det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  const Expr d = Expr(1) / det;
  return d * Mat2(M(1, 1), -M(0, 1), -M(1, 0), M(0, 0));
}

inline Mat2 dt(const Mat2& M) {
  return M.map([](const Expr& e) { return diff(e, Symbol::time()); });
}
inline Vec2 dt(const Vec2& v) { return {diff(v[0], Symbol::time()), diff(v[1], Symbol::time())}; }

}  // namespace detail

/// The point map in normalized form.
struct PointMap {
  Expr alpha{1}, tau{0};
  Expr s{1};
  std::vector<std::vector<Expr>> Q;  // identity when empty
  std::vector<Expr> d;
  AffineAction U;
};

inline PointMap point_map(const EquivTransform& T, int m) {
  T.validate(m);
  PointMap p;
  switch (T.kind) {
    case TransformKind::Kernel:
      p.tau = Expr(T.time_shift);
      for (const auto& row : T.rotation) {
        std::vector<Expr> r;
        for (const auto& q : row) r.emplace_back(q);
        p.Q.push_back(r);
      }
      for (const auto& q : T.space_shift) p.d.emplace_back(q);
      break;
    case TransformKind::Linear: {
      const Expr l(T.scale);
      p.alpha = Expr(1) / (l * l);
      p.s = Expr(1) / l;
      p.U.M = Mat2(Expr(T.K1), Expr(-T.K2), Expr(T.K2), Expr(T.K1));
      p.U.c = {Expr(T.b[0]), Expr(T.b[1])};
      break;
    }
    case TransformKind::AET:
      for (const auto& s : T.steps) {
        const AffineAction a = detail::aet_action(s);
        p.U.c = a.M * p.U.c + a.c;
        p.U.M = a.M * p.U.M;
      }
      p.U.M = p.U.M.map([](const Expr& e) { return simplify(e); });
      p.U.c = {simplify(p.U.c[0]), simplify(p.U.c[1])};
      break;
  }
  return p;
}

/// Transformed system. With U = M^{-1}(U' - c):
///   U'_{t'} = (s^2/alpha) M A M^{-1} Delta' U' + (1/alpha)(c_t + M_t M^{-1}(U' - c) + M f(M^{-1}(U' - c))).
/// The diffusion matrix must come out equal to A and the source free of t;
/// otherwise FormNotPreserved carries the offending term.
inline RDSystem apply(const EquivTransform& T, const RDSystem& sys, const ZeroTestOptions& opt = {}) {
  const PointMap p = point_map(T, sys.m);
  const Mat2& M = p.U.M;
  const Mat2 Mi = detail::inverse(M);
  const Mat2 A = sys.A.matrix();
  const Mat2 At = (p.s * p.s / p.alpha) * (M * A * Mi);
  for (int i = 0; i < 4; ++i) {
    const Expr diffA = simplify(At.e[static_cast<std::size_t>(i)] - A.e[static_cast<std::size_t>(i)]);
    if (!is_zero(diffA, opt).zero()) throw FormNotPreserved("diffusion matrix changes", diffA);
  }
  const Vec2 shifted = Mi * (U_() - p.U.c);
  Substitution old_u;
  old_u.bind(Symbol::jet(1), shifted[0]).bind(Symbol::jet(2), shifted[1]);
  const Vec2 f_old{subst(sys.f[0], old_u), subst(sys.f[1], old_u)};
  const Vec2 drift = detail::dt(p.U.c) + detail::dt(M) * (Mi * (U_() - p.U.c));
  Vec2 ft = (Expr(1) / p.alpha) * (drift + M * f_old);
  for (auto& fb : ft) {
    fb = simplify(fb);
    const Expr ftt = simplify(diff(fb, Symbol::time()));
    if (!is_zero(ftt, opt).zero()) throw FormNotPreserved("source depends on t", ftt);
    fb = simplify(subst(fb, Symbol::time(), Expr(0)));
  }
  return RDSystem(sys.m, sys.A, ft);
}

/// Image of a generator under the point map, written in the new variables.
inline Generator pushforward(const EquivTransform& T, const Generator& X) {
  const int m = X.m;
  const PointMap p = point_map(T, m);
  auto Qx = [&](int i, const std::vector<Expr>& v) {
    if (p.Q.empty()) return v[static_cast<std::size_t>(i)];
    std::vector<Expr> parts;
    for (int j = 0; j < m; ++j) parts.push_back(p.Q[i][j] * v[static_cast<std::size_t>(j)]);
    return sum(parts);
  };
  Generator Y(m);
  Y.eta = p.alpha * X.eta;
  for (int i = 0; i < m; ++i) Y.xi[static_cast<std::size_t>(i)] = p.s * Qx(i, X.xi);
  // dU'/de = M_t U eta + c_t eta - M pi
  const Vec2 dU = X.eta * (detail::dt(p.U.M) * U_() + detail::dt(p.U.c)) - p.U.M * X.pi;
  Y.pi = {-dU[0], -dU[1]};
  // old variables in terms of new ones
  Substitution back;
  const Expr t_old = (t_() - p.tau) / p.alpha;
  std::vector<Expr> xd;
  for (int i = 0; i < m; ++i) xd.push_back(x_(i + 1) - (p.d.empty() ? Expr(0) : p.d[static_cast<std::size_t>(i)]));
  for (int i = 0; i < m; ++i) {
    std::vector<Expr> parts;
    for (int j = 0; j < m; ++j) {
      const Expr q = p.Q.empty() ? Expr(i == j ? 1 : 0) : p.Q[j][i];
      parts.push_back(q * xd[static_cast<std::size_t>(j)]);
    }
    back.bind(Symbol::space(i + 1), sum(parts) / p.s);
  }
  Substitution time_back;
  time_back.bind(Symbol::time(), t_old);
  const Mat2 Mi = detail::inverse(p.U.M);
  const Vec2 u_old = Mi * (U_() - p.U.c);
  auto to_new = [&](const Expr& e) {
    Substitution s = back;
    s.bind(Symbol::jet(1), u_old[0]).bind(Symbol::jet(2), u_old[1]);
    return simplify(subst(subst(e, s), time_back));
  };
  Y.eta = to_new(Y.eta);
  for (auto& x : Y.xi) x = to_new(x);
  Y.pi = {to_new(Y.pi[0]), to_new(Y.pi[1])};
  Y.label = X.label.empty() ? "" : "pushforward(" + X.label + ")";
  return Y;
}

/// Affine action of an AET chain, for the group-property checks.
inline AffineAction aet_action(const std::vector<AetStep>& steps) { return point_map(EquivTransform::aet(steps), 1).U; }

}  // namespace rdsym
