#pragma once

// Transport of a discrete solution along a symmetry and the residual of the
// transported field in the discrete equation.

#include "rdsym/numeric/flow.hpp"

namespace rdsym {

struct Interpolated {
  cplx value;
  double error = 0;  // spread between the two cubic stencils around the point
};

namespace detail {

inline std::array<double, 4> lagrange4(double s) {
  // nodes -1, 0, 1, 2
  return {-s * (s - 1) * (s - 2) / 6, (s + 1) * (s - 1) * (s - 2) / 2, -(s + 1) * s * (s - 2) / 2,
          (s + 1) * s * (s - 1) / 6};
}

inline int wrap(int i, int n) { return (i % n + n) % n; }

/// Cubic interpolation of a periodic field with the stencil starting at offset `lo` (-1 or -2).
inline cplx periodic_cubic(const Grid& g, const std::vector<cplx>& w, const std::array<double, 3>& x, int lo) {
  const double h = g.h();
  std::array<int, 2> i0{0, 0};
  std::array<std::array<double, 4>, 2> wt{};
  for (int d = 0; d < g.m; ++d) {
    const double r = (x[static_cast<std::size_t>(d)] + g.L / 2) / h;
    const int base = static_cast<int>(std::floor(r));
    double s = r - base;
    int start = base - 1;
    if (lo == -2) {
      start = base - 2;
      s += 1;
    }
    i0[static_cast<std::size_t>(d)] = start;
    wt[static_cast<std::size_t>(d)] = lagrange4(s);
  }
  cplx acc = 0;
  if (g.m == 1) {
    for (int a = 0; a < 4; ++a) acc += wt[0][static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(wrap(i0[0] + a, g.n))];
    return acc;
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const std::size_t k = static_cast<std::size_t>(wrap(i0[0] + a, g.n)) * g.n + wrap(i0[1] + b, g.n);
      acc += wt[0][static_cast<std::size_t>(a)] * wt[1][static_cast<std::size_t>(b)] * w[k];
    }
  }
  return acc;
}

}  // namespace detail

/// Periodic cubic Lagrange interpolation in space and cubic Lagrange in time.
inline Interpolated interpolate(const Trajectory& tr, double t, const std::array<double, 3>& x) {
  const auto& st = tr.states;
  if (st.size() < 4) throw NumericError("trajectory too short to interpolate");
  const double dt = tr.dt(), t0 = st.front().t;
  const double r = (t - t0) / dt;
  if (r < -1e-9 || r > static_cast<double>(st.size() - 1) + 1e-9) {
    throw NumericError("time " + std::to_string(t) + " outside the trajectory");
  }
  const int last = static_cast<int>(st.size()) - 1;
  const double rn = std::round(r);
  if (std::abs(r - rn) < 1e-9) {
    const auto& w = st[static_cast<std::size_t>(rn)].w;
    const cplx a = detail::periodic_cubic(tr.grid, w, x, -1), b = detail::periodic_cubic(tr.grid, w, x, -2);
    return {a, std::abs(a - b)};
  }
  const int start = std::clamp(static_cast<int>(std::floor(r)) - 1, 0, last - 3);
  const auto wt = detail::lagrange4(r - start - 1);
  Interpolated out{0, 0};
  for (int k = 0; k < 4; ++k) {
    const auto& w = st[static_cast<std::size_t>(start + k)].w;
    const cplx a = detail::periodic_cubic(tr.grid, w, x, -1), b = detail::periodic_cubic(tr.grid, w, x, -2);
    out.value += wt[static_cast<std::size_t>(k)] * a;
    out.error = std::max(out.error, std::abs(a - b));
  }
  return out;
}

inline std::array<double, 3> grid_point(const Grid& g, std::size_t k) {
  std::array<double, 3> x{0, 0, 0};
  if (g.m == 1) {
    x[0] = g.coord(static_cast<int>(k));
  } else {
    x[0] = g.coord(static_cast<int>(k) / g.n);
    x[1] = g.coord(static_cast<int>(k) % g.n);
  }
  return x;
}

/// Max over interior points of |(w+ - w-)/(2 dt) - A Delta_h w - f(w)|. Stencils do
/// not wrap, so fields need not be periodic.
inline double discrete_residual(const RDSystem& sys, const Grid& g, const std::vector<cplx>& wm,
                                const std::vector<cplx>& w, const std::vector<cplx>& wp, double dt, int margin = 2) {
  const CompiledSource f(sys);
  const cplx d(sys.A.a().number().get_d(), 1.0);
  double r = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const int i = g.m == 1 ? static_cast<int>(k) : static_cast<int>(k) / g.n;
    const int j = g.m == 1 ? margin : static_cast<int>(k) % g.n;
    if (i < margin || i >= g.n - margin || j < margin || j >= g.n - margin) continue;
    const cplx res = (wp[k] - wm[k]) / (2 * dt) - d * discrete_laplacian(g, w, k) - f(w[k]);
    r = std::max(r, std::abs(res));
  }
  return r;
}

struct TransportOptions {
  int probes = 3;        // probe times, spread over the middle half of the run
  FlowOptions flow;
};

struct TransportResult {
  double baseline = 0;     // residual of the discrete solution itself
  double transported = 0;  // residual of the transported field
  double interp_error = 0;
  std::string method;
};

/// Field exp(theta X) u on the grid at time t: the value at (t, x) is M u(t0, x0) + c
/// where (t0, x0) is carried to (t, x) by the base flow.
inline std::vector<cplx> transported_field(const Trajectory& tr, const CompiledGenerator& g, double theta, double t,
                                           double* interp_error = nullptr, const FlowOptions& fo = {}) {
  const Grid& grid = tr.grid;
  std::vector<cplx> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid_point(grid, k);
    const FlowTransform back = g(-theta, t, x, fo);
    const FlowTransform fwd = g(theta, back.t, back.x, fo);
    const Interpolated u = interpolate(tr, back.t, back.x);
    out[k] = fwd.apply(u.value);
    if (interp_error) *interp_error = std::max(*interp_error, u.error);
  }
  return out;
}

/// Integrates sys from ic, transports the solution along theta X and compares the
/// residuals of the discrete solution and of its image.
inline TransportResult symmetry_transport_residual(const RDSystem& sys, const Generator& X, double theta,
                                                   const Grid& grid, const FieldState& ic, double T,
                                                   const TransportOptions& opt = {}) {
  const Trajectory tr = integrate(sys, grid, ic, T);
  const CompiledGenerator g(X, sys.A);
  TransportResult res;
  res.method = g.closed_form().empty() ? "ode" : g.closed_form();
  const int steps = static_cast<int>(tr.states.size()) - 1;
  const double dt = tr.dt();
  for (int p = 0; p < opt.probes; ++p) {
    const int n = steps / 4 + (steps / 2) * p / std::max(1, opt.probes - 1);
    const auto& s = tr.states;
    res.baseline = std::max(res.baseline, discrete_residual(sys, grid, s[static_cast<std::size_t>(n - 1)].w,
                                                            s[static_cast<std::size_t>(n)].w,
                                                            s[static_cast<std::size_t>(n + 1)].w, dt));
    const double t = s[static_cast<std::size_t>(n)].t;
    const auto wm = transported_field(tr, g, theta, t - dt, &res.interp_error, opt.flow);
    const auto w0 = transported_field(tr, g, theta, t, &res.interp_error, opt.flow);
    const auto wp = transported_field(tr, g, theta, t + dt, &res.interp_error, opt.flow);
    res.transported = std::max(res.transported, discrete_residual(sys, grid, wm, w0, wp, dt));
  }
  return res;
}

}  // namespace rdsym
