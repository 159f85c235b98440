#pragma once

// One-parameter groups exp(theta X) of point generators. The base flow on
// (t, x) does not involve U; along it U' = M U + c with
// dM/dtheta = -N M, dc/dtheta = -N c - B.

#include <boost/numeric/odeint.hpp>

#include "rdsym/numeric/solver.hpp"
#include "rdsym/symmetry/generator.hpp"

namespace rdsym {

struct FlowTransform {
  double t = 0;
  std::array<double, 3> x{0, 0, 0};
  std::array<double, 4> M{1, 0, 0, 1};  // row-major
  std::array<double, 2> c{0, 0};
  std::string method;  // closed form name or "ode"

  cplx apply(cplx w) const {
    const double u = w.real(), v = w.imag();
    return {M[0] * u + M[1] * v + c[0], M[2] * u + M[3] * v + c[1]};
  }
};

struct FlowOptions {
  double abs_tol = 1e-10, rel_tol = 1e-10;
  double blowup = 1e12;
  long max_evals = 2000000;
  bool closed_forms = true;
};

/// Generator with compiled coefficients, reusable across many base points.
class CompiledGenerator {
 public:
  CompiledGenerator(const Generator& g, const DiffusionMatrix& A) : gen_(g), m_(g.m) {
    g.validate();
    auto check = [](const Expr& e) {
      for (const Symbol& s : free_symbols(e)) {
        if (s.kind == SymbolKind::Param) throw NumericError("generator has free parameters; substitute them first");
      }
      return CompiledExpr(e);
    };
    eta_ = check(g.eta);
    for (const auto& x : g.xi) xi_.push_back(check(x));
    const Mat2 n = g.N();
    for (int i = 0; i < 4; ++i) N_[static_cast<std::size_t>(i)] = check(simplify(n.e[static_cast<std::size_t>(i)]));
    const Vec2 b = g.B();
    B_ = {check(b[0]), check(b[1])};
    detect(A);
  }

  int m() const { return m_; }
  const std::string& closed_form() const { return closed_; }

  FlowTransform operator()(double theta, double t0, const std::array<double, 3>& x0, const FlowOptions& opt = {}) const {
    if (opt.closed_forms && !closed_.empty()) return closed(theta, t0, x0);
    return ode(theta, t0, x0, opt);
  }

 private:
  void detect(const DiffusionMatrix& A) {
    auto same = [&](const Generator& h) {
      if (h.m != m_) return false;
      return proven_zero(simplify(gen_.eta - h.eta)) && proven_zero(simplify(gen_.pi[0] - h.pi[0])) &&
             proven_zero(simplify(gen_.pi[1] - h.pi[1])) && [&] {
               for (int i = 0; i < m_; ++i) {
                 if (!proven_zero(simplify(gen_.xi[static_cast<std::size_t>(i)] - h.xi[static_cast<std::size_t>(i)])))
                   return false;
               }
               return true;
             }();
    };
    if (same(P0(m_))) {
      closed_ = "P0";
    } else if (same(Dil(m_))) {
      closed_ = "D";
    }
    for (int i = 1; i <= m_ && closed_.empty(); ++i) {
      if (same(P(m_, i))) {
        closed_ = "P";
        index_ = {i, 0};
      } else if (A.a().is_number() && same(Gal(m_, i, A))) {
        closed_ = "G";
        index_ = {i, 0};
        const Mat2 ai = A.inverse();
        for (int k = 0; k < 4; ++k) ainv_[static_cast<std::size_t>(k)] = simplify(ai.e[static_cast<std::size_t>(k)]).number().get_d();
      }
      for (int j = i + 1; j <= m_ && closed_.empty(); ++j) {
        if (same(Jrot(m_, i, j))) {
          closed_ = "J";
          index_ = {i, j};
        }
      }
    }
  }

  FlowTransform closed(double th, double t0, const std::array<double, 3>& x0) const {
    FlowTransform f;
    f.t = t0;
    f.x = x0;
    f.method = closed_;
    const auto i = static_cast<std::size_t>(index_[0] - 1);
    if (closed_ == "P0") {
      f.t = t0 + th;
    } else if (closed_ == "P") {
      f.x[i] += th;
    } else if (closed_ == "D") {
      f.t = std::exp(th) * t0;
      for (int k = 0; k < m_; ++k) f.x[static_cast<std::size_t>(k)] *= std::exp(th / 2);
    } else if (closed_ == "J") {
      const auto j = static_cast<std::size_t>(index_[1] - 1);
      f.x[i] = x0[i] * std::cos(th) - x0[j] * std::sin(th);
      f.x[j] = x0[i] * std::sin(th) + x0[j] * std::cos(th);
    } else {
      // x_i(theta) = x_i + theta t, U' = exp(-s A^{-1}) U with s = (theta x_i + theta^2 t / 2) / 2.
      // A^{-1} = p I + q J commutes with J, so the exponential is a scaled rotation.
      f.x[i] = x0[i] + th * t0;
      const double s = (th * x0[i] + th * th * t0 / 2) / 2;
      const double p = ainv_[0], q = ainv_[1];  // ((p, q), (-q, p))
      const double r = std::exp(-s * p);
      f.M = {r * std::cos(s * q), -r * std::sin(s * q), r * std::sin(s * q), r * std::cos(s * q)};
    }
    return f;
  }

  FlowTransform ode(double theta, double t0, const std::array<double, 3>& x0, const FlowOptions& opt) const {
    namespace oi = boost::numeric::odeint;
    using State = std::vector<double>;
    const std::size_t mm = static_cast<std::size_t>(m_);
    State y(1 + mm + 6, 0.0);
    y[0] = t0;
    for (std::size_t k = 0; k < mm; ++k) y[1 + k] = x0[k];
    const std::size_t iM = 1 + mm, ic = iM + 4;
    y[iM] = y[iM + 3] = 1.0;
    long evals = 0;
    auto rhs = [&](const State& s, State& d, double th) {
      if (++evals > opt.max_evals) throw NumericError("flow did not reach theta; stalled near theta = " + std::to_string(th));
      for (double z : s) {
        if (!std::isfinite(z) || std::abs(z) > opt.blowup) {
          throw NumericError("flow leaves the domain of definition near theta = " + std::to_string(th));
        }
      }
      PointArgs p;
      p.t = s[0];
      for (std::size_t k = 0; k < mm; ++k) p.x[k] = s[1 + k];
      d[0] = eta_(p);
      for (std::size_t k = 0; k < mm; ++k) d[1 + k] = xi_[k](p);
      double n[4];
      for (std::size_t k = 0; k < 4; ++k) n[k] = N_[k](p);
      const double* M = &s[iM];
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) d[iM + 2 * r + c] = -(n[2 * r] * M[c] + n[2 * r + 1] * M[2 + c]);
      }
      const double c0 = s[ic], c1 = s[ic + 1];
      d[ic] = -(n[0] * c0 + n[1] * c1) - B_[0](p);
      d[ic + 1] = -(n[2] * c0 + n[3] * c1) - B_[1](p);
    };
    double reached = 0;
    auto observe = [&](const State& s, double th) {
      for (double z : s) {
        if (!std::isfinite(z) || std::abs(z) > opt.blowup) {
          throw NumericError("flow leaves the domain of definition near theta = " + std::to_string(th) +
                             " (last regular theta = " + std::to_string(reached) + ")");
        }
      }
      reached = th;
    };
    if (theta != 0) {
      auto stepper = oi::make_controlled(opt.abs_tol, opt.rel_tol, oi::runge_kutta_dopri5<State>());
      oi::integrate_adaptive(stepper, rhs, y, 0.0, theta, theta / 64, observe);
      observe(y, theta);
    }
    FlowTransform f;
    f.method = "ode";
    f.t = y[0];
    for (std::size_t k = 0; k < mm; ++k) f.x[k] = y[1 + k];
    for (std::size_t k = 0; k < 4; ++k) f.M[k] = y[iM + k];
    f.c = {y[ic], y[ic + 1]};
    return f;
  }

  Generator gen_;
  int m_;
  CompiledExpr eta_;
  std::vector<CompiledExpr> xi_;
  std::array<CompiledExpr, 4> N_;
  std::array<CompiledExpr, 2> B_;
  std::string closed_;
  std::array<int, 2> index_{0, 0};
  std::array<double, 4> ainv_{0, 0, 0, 0};
};

/// exp(theta X) applied at (t0, x0).
inline FlowTransform flow(const Generator& g, const DiffusionMatrix& A, double theta, double t0,
                          const std::array<double, 3>& x0, const FlowOptions& opt = {}) {
  return CompiledGenerator(g, A)(theta, t0, x0, opt);
}

/// Composition law exp(a X) exp(b X) = exp((a + b) X): the largest deviation at a base point.
inline double composition_defect(const CompiledGenerator& g, double a, double b, double t0,
                                 const std::array<double, 3>& x0, cplx w0, const FlowOptions& opt = {}) {
  const FlowTransform f1 = g(a, t0, x0, opt);
  const FlowTransform f2 = g(b, f1.t, f1.x, opt);
  const FlowTransform f12 = g(a + b, t0, x0, opt);
  double d = std::max(std::abs(f2.t - f12.t), std::abs(f2.apply(f1.apply(w0)) - f12.apply(w0)));
  for (int k = 0; k < g.m(); ++k) d = std::max(d, std::abs(f2.x[static_cast<std::size_t>(k)] - f12.x[static_cast<std::size_t>(k)]));
  return d;
}

}  // namespace rdsym
