#pragma once

// Semi-implicit solver for U_t = A Delta U + f(U) on a periodic grid, m = 1, 2.
//
// With w = u + i v the diffusion term is (a + i) Delta w. Space: the
// second-order 3-point (5-point) Laplacian, diagonalized by the FFT.
// Time: Crank-Nicolson for the Laplacian, Adams-Bashforth 2 for f. The linear
// part is unconditionally stable for a >= 0, so no tau <= c h^2 restriction
// applies; a < 0 (backward diffusion) is rejected.

#include <fftw3.h>

#include <complex>
#include <functional>

#include "rdsym/numeric/compiled.hpp"
#include "rdsym/pde/model.hpp"

namespace rdsym {

using cplx = std::complex<double>;

struct Grid {
  int m = 1;
  int n = 256;       // points per axis
  double L = 2 * M_PI;  // extent per axis, domain [-L/2, L/2)
  double tau = 1e-3;

  double h() const { return L / n; }
  std::size_t size() const { return m == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
  double coord(int i) const { return -L / 2 + i * h(); }

  void validate() const {
    if (m != 1 && m != 2) throw NumericError("grid dimension must be 1 or 2");
    if (n < 8) throw NumericError("grid needs at least 8 points per axis");
    if (!(L > 0) || !(tau > 0)) throw NumericError("grid extent and time step must be positive");
  }
};

struct FieldState {
  double t = 0;
  std::vector<cplx> w;  // u + i v, row-major for m = 2

  double max_abs() const {
    double r = 0;
    for (const auto& z : w) r = std::max(r, std::abs(z));
    return r;
  }
};

struct Trajectory {
  Grid grid;
  std::vector<FieldState> states;  // equally spaced in time
  double dt() const { return states.size() > 1 ? states[1].t - states[0].t : 0.0; }
};

/// f as a map on w, compiled from the source terms of a system.
class CompiledSource {
 public:
  CompiledSource() = default;
  explicit CompiledSource(const RDSystem& sys) : f1_(sys.f[0]), f2_(sys.f[1]) {
    for (const auto& fb : sys.f) {
      for (const Symbol& s : free_symbols(fb)) {
        if (s.kind == SymbolKind::Param) throw NumericError("source has free parameters; substitute them first");
      }
    }
  }
  cplx operator()(cplx w) const {
    PointArgs p;
    p.u = w.real();
    p.v = w.imag();
    return {f1_(p), f2_(p)};
  }

 private:
  CompiledExpr f1_, f2_;
};

namespace detail {

class FftPlan {
 public:
  FftPlan(const Grid& g) : n_(g.size()) {
    in_ = fftw_alloc_complex(n_);
    out_ = fftw_alloc_complex(n_);
    if (g.m == 1) {
      fwd_ = fftw_plan_dft_1d(g.n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_1d(g.n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      fwd_ = fftw_plan_dft_2d(g.n, g.n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_2d(g.n, g.n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }
  void forward(const std::vector<cplx>& a, std::vector<cplx>& b) { run(fwd_, a, b, 1.0); }
  void backward(const std::vector<cplx>& a, std::vector<cplx>& b) { run(bwd_, a, b, 1.0 / static_cast<double>(n_)); }

 private:
  void run(fftw_plan p, const std::vector<cplx>& a, std::vector<cplx>& b, double scale) {
    std::copy(a.begin(), a.end(), reinterpret_cast<cplx*>(in_));
    fftw_execute(p);
    b.resize(n_);
    const cplx* o = reinterpret_cast<const cplx*>(out_);
    for (std::size_t i = 0; i < n_; ++i) b[i] = o[i] * scale;
  }
  std::size_t n_;
  fftw_complex *in_, *out_;
  fftw_plan fwd_, bwd_;
};

/// Symbol of the finite-difference Laplacian: -(4/h^2) sum sin^2(k h / 2).
inline std::vector<double> laplacian_symbol(const Grid& g) {
  const double h = g.h();
  std::vector<double> s1(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    const double sn = std::sin(M_PI * j / g.n);
    s1[static_cast<std::size_t>(j)] = -4.0 / (h * h) * sn * sn;
  }
  if (g.m == 1) return s1;
  std::vector<double> s(g.size());
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) s[static_cast<std::size_t>(i) * g.n + j] = s1[i] + s1[j];
  }
  return s;
}

}  // namespace detail

/// Finite-difference Laplacian at point `k`; `wrap` selects periodic stencils.
inline cplx discrete_laplacian(const Grid& g, const std::vector<cplx>& w, std::size_t k) {
  const double h2 = g.h() * g.h();
  const int n = g.n;
  auto at = [&](int i, int j) {
    i = (i % n + n) % n;
    j = (j % n + n) % n;
    return w[g.m == 1 ? static_cast<std::size_t>(i) : static_cast<std::size_t>(i) * n + j];
  };
  if (g.m == 1) {
    const int i = static_cast<int>(k);
    return (at(i - 1, 0) - 2.0 * at(i, 0) + at(i + 1, 0)) / h2;
  }
  const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
  return (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) - 4.0 * at(i, j)) / h2;
}

class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double t) : NumericError(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

struct IntegrateOptions {
  int sample_every = 1;
  double blowup = 1e8;
};

/// Integrates from ic over [ic.t, ic.t + T]; T is rounded to whole steps.
inline Trajectory integrate(const RDSystem& sys, const Grid& g, const FieldState& ic, double T,
                            const IntegrateOptions& opt = {}) {
  g.validate();
  if (sys.m != g.m) throw NumericError("system and grid dimensions differ");
  if (ic.w.size() != g.size()) throw NumericError("initial state does not match the grid");
  if (!sys.A.a().is_number()) throw NumericError("diffusion parameter must be a number");
  const double a = sys.A.a().number().get_d();
  if (a < 0) throw NumericError("a < 0 is ill-posed (backward diffusion)");
  const CompiledSource f(sys);
  const cplx d(a, 1.0);
  const auto sym = detail::laplacian_symbol(g);
  std::vector<cplx> lhs(g.size()), rhs(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    lhs[k] = 1.0 - 0.5 * g.tau * d * sym[k];
    rhs[k] = 1.0 + 0.5 * g.tau * d * sym[k];
  }
  detail::FftPlan fft(g);
  Trajectory tr;
  tr.grid = g;
  tr.states.push_back(ic);
  const long steps = std::lround(T / g.tau);
  std::vector<cplx> w = ic.w, F(g.size()), Fold, W, Fh, Fold_h, next;
  auto eval_f = [&](const std::vector<cplx>& x, std::vector<cplx>& out) {
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = f(x[k]);
  };
  eval_f(w, F);
  Fold = F;
  for (long s = 1; s <= steps; ++s) {
    fft.forward(w, W);
    fft.forward(F, Fh);
    fft.forward(Fold, Fold_h);
    for (std::size_t k = 0; k < g.size(); ++k) {
      W[k] = (rhs[k] * W[k] + g.tau * (1.5 * Fh[k] - 0.5 * Fold_h[k])) / lhs[k];
    }
    fft.backward(W, next);
    w.swap(next);
    const double t = ic.t + s * g.tau;
    for (const auto& z : w) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > opt.blowup) {
        throw DivergenceError("solution diverged at t = " + std::to_string(t), t);
      }
    }
    Fold.swap(F);
    eval_f(w, F);
    if (s % opt.sample_every == 0) tr.states.push_back({t, w});
  }
  return tr;
}

/// Samples a function of x on the grid.
inline FieldState sample_state(const Grid& g, const std::function<cplx(const std::array<double, 3>&)>& fn,
                               double t = 0) {
  FieldState s;
  s.t = t;
  s.w.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::array<double, 3> x{0, 0, 0};
    if (g.m == 1) {
      x[0] = g.coord(static_cast<int>(k));
    } else {
      x[0] = g.coord(static_cast<int>(k) / g.n);
      x[1] = g.coord(static_cast<int>(k) % g.n);
    }
    s.w[k] = fn(x);
  }
  return s;
}

}  // namespace rdsym
