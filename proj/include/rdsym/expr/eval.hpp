#pragma once

// Numeric evaluation in extended precision and the three-way zero verdict.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>

#include "rdsym/expr/simplify.hpp"
#include "rdsym/expr/traverse.hpp"

namespace rdsym {

using real = long double;

class DomainError : public SymbolicError {
 public:
  using SymbolicError::SymbolicError;
};

/// Deterministic smooth stand-in for an arbitrary function of one variable:
/// a short random trigonometric sum whose derivatives are exact.
class SmoothFunction {
 public:
  explicit SmoothFunction(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.3, 1.2), freq(0.4, 1.4), phase(0.0, 6.2831853);
    for (auto& c : coeffs_) c = {amp(rng), freq(rng), phase(rng)};
    offset_ = amp(rng);
  }

  real operator()(real s, int order) const {
    real acc = order == 0 ? offset_ : 0.0L;
    for (const auto& c : coeffs_) {
      acc += c.a * std::pow(c.w, static_cast<real>(order)) *
             std::sin(c.w * s + c.p + static_cast<real>(order) * 1.5707963267948966192L);
    }
    return acc;
  }

 private:
  struct Mode {
    real a, w, p;
  };
  std::array<Mode, 3> coeffs_{};
  real offset_ = 0;
};

/// Deterministic solution of Delta Psi = kappa Psi in dim <= 3, with exact derivatives.
class LaplaceEigenfunction {
 public:
  LaplaceEigenfunction(real kappa, int dim, std::uint64_t seed) : kappa_(kappa), dim_(dim) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    real norm = 0;
    for (int i = 0; i < dim; ++i) {
      dir_[static_cast<std::size_t>(i)] = g(rng);
      norm += dir_[static_cast<std::size_t>(i)] * dir_[static_cast<std::size_t>(i)];
    }
    norm = std::sqrt(norm);
    for (int i = 0; i < dim; ++i) dir_[static_cast<std::size_t>(i)] /= norm;
    phase_ = std::uniform_real_distribution<double>(0.0, 6.28)(rng);
    c0_ = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  }

  real operator()(const std::array<real, 3>& x, const std::array<int, 3>& dx) const {
    const int order = dx[0] + dx[1] + dx[2];
    real dirpow = 1;
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < dx[static_cast<std::size_t>(i)]; ++k) dirpow *= dir_[static_cast<std::size_t>(i)];
    }
    real s = 0;
    for (int i = 0; i < dim_; ++i) s += dir_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (std::fabs(kappa_) < 1e-15L) {
      // c0 + s + x1*x2 (the product is harmonic only when dim >= 2)
      real val = 0;
      if (order == 0) val = c0_ + s;
      if (order == 1) val = dirpow;
      if (dim_ >= 2) {
        if (order == 0) val += x[0] * x[1];
        if (dx == std::array<int, 3>{1, 0, 0}) val += x[1];
        if (dx == std::array<int, 3>{0, 1, 0}) val += x[0];
        if (dx == std::array<int, 3>{1, 1, 0}) val += 1;
      }
      return val;
    }
    if (kappa_ > 0) {
      const real k = std::sqrt(kappa_);
      return std::pow(k, static_cast<real>(order)) * dirpow * std::exp(k * s);
    }
    const real k = std::sqrt(-kappa_);
    return std::pow(k, static_cast<real>(order)) * dirpow *
           std::cos(k * s + phase_ + static_cast<real>(order) * 1.5707963267948966192L);
  }

 private:
  real kappa_;
  int dim_;
  std::array<real, 3> dir_{0, 0, 0};
  real phase_ = 0, c0_ = 1;
};

struct EvalEnv {
  std::map<Symbol, real> values;
  std::uint64_t function_seed = 0x5eed;

  real opaque(const std::string& name, int order, real s) const {
    return SmoothFunction(std::hash<std::string>{}(name) ^ function_seed)(s, order);
  }
  real psi(real kappa, int dim, const std::array<int, 3>& dx) const {
    std::array<real, 3> x{0, 0, 0};
    for (int i = 1; i <= 3; ++i) {
      if (auto it = values.find(Symbol::space(i)); it != values.end()) x[static_cast<std::size_t>(i - 1)] = it->second;
    }
    return LaplaceEigenfunction(kappa, dim, function_seed * 31 + 7)(x, dx);
  }
};

namespace detail {

inline real lookup(const EvalEnv& env, const Symbol& s) {
  auto it = env.values.find(s);
  if (it == env.values.end()) {
    throw DomainError("no value for symbol in evaluation");
  }
  return it->second;
}

inline real eval_rec(const Expr& e, const EvalEnv& env, std::unordered_map<Expr, real, ExprHash>& memo) {
  if (auto it = memo.find(e); it != memo.end()) return it->second;
  const Node& n = e.node();
  real out = 0;
  switch (n.kind) {
    case NodeKind::Number:
      out = static_cast<real>(n.num.get_num().get_d()) / static_cast<real>(n.num.get_den().get_d());
      break;
    case NodeKind::Sym:
      if (n.sym.kind == SymbolKind::PolarR) {
        const real u = lookup(env, Symbol::jet(1)), v = lookup(env, Symbol::jet(2));
        out = std::sqrt(u * u + v * v);
      } else if (n.sym.kind == SymbolKind::PolarZ) {
        const real u = lookup(env, Symbol::jet(1)), v = lookup(env, Symbol::jet(2));
        if (u == 0) throw DomainError("z undefined at u = 0");
        out = std::atan(v / u);
      } else {
        out = lookup(env, n.sym);
      }
      break;
    case NodeKind::Add:
      out = eval_rec(Expr(n.num), env, memo);
      for (const auto& [t, q] : n.ops) out += eval_rec(Expr(q), env, memo) * eval_rec(t, env, memo);
      break;
    case NodeKind::Mul: {
      out = eval_rec(Expr(n.num), env, memo);
      for (const auto& [b, q] : n.ops) {
        const real base = eval_rec(b, env, memo);
        if (is_integer(q)) {
          if (base == 0 && q < 0) throw DomainError("division by zero");
          out *= std::pow(base, static_cast<real>(q.get_num().get_si()));
        } else {
          if (base <= 0) throw DomainError("fractional power of non-positive value");
          out *= std::pow(base, static_cast<real>(q.get_d()));
        }
      }
      break;
    }
    case NodeKind::Func: {
      const real a = eval_rec(n.args[0], env, memo);
      switch (n.fn) {
        case Fn::Exp:
          if (a > 700) throw DomainError("exp overflow");
          out = std::exp(a);
          break;
        case Fn::Ln:
          if (a <= 0) throw DomainError("logarithm of non-positive value");
          out = std::log(a);
          break;
        case Fn::Sin:
          out = std::sin(a);
          break;
        case Fn::Cos:
          out = std::cos(a);
          break;
        case Fn::Atan:
          out = std::atan(a);
          break;
      }
      break;
    }
    case NodeKind::Opaque:
      out = env.opaque(n.name, n.order, eval_rec(n.args[0], env, memo));
      break;
    case NodeKind::Psi:
      out = env.psi(eval_rec(n.args[0], env, memo), n.dim, n.dx);
      break;
  }
  if (!std::isfinite(out)) throw DomainError("non-finite value");
  memo.emplace(e, out);
  return out;
}

}  // namespace detail

inline real evaluate(const Expr& e, const EvalEnv& env) {
  std::unordered_map<Expr, real, ExprHash> memo;
  return detail::eval_rec(e, env, memo);
}

/// Draws admissible sample points: u, v in (0.1, 2) so that R > 0 and z is
/// defined, other jets in (-1, 1), t in (0.1, 1), x in (-1, 1), parameters as
/// random rationals in [-3, 3].
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  EvalEnv draw(const std::set<Symbol>& symbols, const std::map<Symbol, real>& fixed = {}) {
    EvalEnv env;
    env.function_seed = 0x5eed;
    std::uniform_real_distribution<double> uv(0.1, 2.0), jet(-1.0, 1.0), tt(0.1, 1.0), xx(-1.0, 1.0);
    std::uniform_int_distribution<int> num(-21, 21), den(1, 7);
    for (const Symbol& s : symbols) {
      if (auto it = fixed.find(s); it != fixed.end()) {
        env.values[s] = it->second;
        continue;
      }
      switch (s.kind) {
        case SymbolKind::Jet:
          env.values[s] = s.jet_order() == 0 ? uv(rng_) : jet(rng_);
          break;
        case SymbolKind::Time:
          env.values[s] = tt(rng_);
          break;
        case SymbolKind::Space:
          env.values[s] = xx(rng_);
          break;
        case SymbolKind::Param:
        case SymbolKind::Placeholder: {
          Rational q(num(rng_), den(rng_));
          q.canonicalize();
          if (q > 3) q = 3;
          if (q < -3) q = -3;
          env.values[s] = static_cast<real>(q.get_d());
          break;
        }
        default:
          break;
      }
    }
    for (const auto& [s, v] : fixed) env.values[s] = v;
    return env;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

enum class ZeroKind { ProvenZero, NumericallyZero, NonZero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::ProvenZero;
  std::map<Symbol, real> witness;
  real value = 0;

  bool zero() const { return kind != ZeroKind::NonZero; }
};

inline const char* to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::ProvenZero:
      return "ProvenZero";
    case ZeroKind::NumericallyZero:
      return "NumericallyZero";
    case ZeroKind::NonZero:
      return "NonZero";
  }
  return "?";
}

struct ZeroTestOptions {
  int seeds = 20;
  real tolerance = 1e-10L;
  std::uint64_t rng_seed = 20240601;
  int max_retries = 200;
  std::map<Symbol, real> fixed;  // symbols held at given values (e.g. sampled parameters)
};

/// ProvenZero iff simplify(e) is the zero node; otherwise numerical sampling. The
/// tolerance is relative to the sum of the absolute values of the top-level terms
/// once that exceeds 1.
inline ZeroVerdict is_zero(const Expr& e, const ZeroTestOptions& opt = {}) {
  ZeroVerdict verdict;
  Expr s = simplify(e);
  if (s.is_zero()) return verdict;
  const auto symbols = free_symbols(s);
  const auto terms = terms_of(s);
  PointSampler sampler(opt.rng_seed);
  int accepted = 0, attempts = 0;
  while (accepted < opt.seeds) {
    if (++attempts > opt.max_retries + opt.seeds) {
      throw DomainError("evaluation failed at every sample point");
    }
    EvalEnv env = sampler.draw(symbols, opt.fixed);
    real val = 0, scale = 0;
    try {
      for (const auto& [term, q] : terms) {
        const real tv = evaluate(term, env) * static_cast<real>(q.get_d());
        val += tv;
        scale += std::fabs(tv);
      }
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(val)) continue;
    ++accepted;
    if (std::fabs(val) >= opt.tolerance * std::max<real>(1, scale)) {
      verdict.kind = ZeroKind::NonZero;
      verdict.witness = env.values;
      verdict.value = val;
      return verdict;
    }
  }
  verdict.kind = ZeroKind::NumericallyZero;
  return verdict;
}

inline ZeroVerdict is_zero(const Expr& e, int seeds) {
  ZeroTestOptions opt;
  opt.seeds = seeds;
  return is_zero(e, opt);
}

/// Best rational approximation with denominator at most max_den.
inline Rational rational_approx(real x, long max_den = 1000000) {
  const bool neg = x < 0;
  real r = std::fabs(x);
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    const real a_r = std::floor(r);
    if (a_r > 1e15L) break;
    const mpz_class a(static_cast<double>(a_r));
    mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const real frac = r - a_r;
    if (frac < 1e-14L) break;
    r = 1 / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

/// If e is a constant (independent of every free symbol), returns it as an exact
/// rational, confirmed by a zero test on the difference.
inline std::optional<Rational> constant_value(const Expr& e, const ZeroTestOptions& opt = {}) {
  const Expr s = simplify(e);
  if (s.kind() == NodeKind::Number) return s.number();
  PointSampler sampler(opt.rng_seed ^ 0x9e3779b9ULL);
  const auto symbols = free_symbols(s);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    try {
      const real val = evaluate(s, sampler.draw(symbols, opt.fixed));
      const Rational q = rational_approx(val);
      if (is_zero(s - Expr(q), opt).zero()) return q;
      return std::nullopt;
    } catch (const DomainError&) {
    }
  }
  return std::nullopt;
}

}  // namespace rdsym
