#pragma once

// Brackets of point-symmetry generators and closure of finite sets of them.

#include <Eigen/Dense>
#include <sstream>

#include "rdsym/symmetry/prolong.hpp"

namespace rdsym {

namespace detail {

/// Components of X over (t, x_1..x_m, u, v); the U-part is -pi.
inline std::vector<Expr> components(const Generator& X) {
  std::vector<Expr> c{X.eta};
  for (const auto& x : X.xi) c.push_back(x);
  c.push_back(-X.pi[0]);
  c.push_back(-X.pi[1]);
  return c;
}

inline std::vector<Symbol> coordinates(int m) {
  std::vector<Symbol> s{Symbol::time()};
  for (int i = 1; i <= m; ++i) s.push_back(Symbol::space(i));
  s.push_back(Symbol::jet(1));
  s.push_back(Symbol::jet(2));
  return s;
}

inline Generator from_components(int m, const std::vector<Expr>& c) {
  Generator g(m);
  g.eta = c[0];
  for (int i = 0; i < m; ++i) g.xi[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i + 1)];
  g.pi = {-c[static_cast<std::size_t>(m + 1)], -c[static_cast<std::size_t>(m + 2)]};
  return g.simplified();
}

}  // namespace detail

/// [X, Y]^k = X(Y^k) - Y(X^k).
inline Generator commutator(const Generator& X, const Generator& Y) {
  if (X.m != Y.m) throw SymbolicError("commutator of generators in different dimensions");
  const auto vars = detail::coordinates(X.m);
  const auto cx = detail::components(X), cy = detail::components(Y);
  std::vector<Expr> out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::vector<Expr> parts;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      parts.push_back(cx[j] * diff(cy[k], vars[j]));
      parts.push_back(-(cy[j] * diff(cx[k], vars[j])));
    }
    out.push_back(sum(parts));
  }
  Generator g = detail::from_components(X.m, out);
  if (!X.label.empty() && !Y.label.empty()) g.label = "[" + X.label + ", " + Y.label + "]";
  return g;
}

/// The basic symmetries P_0, P_mu, J_{mu nu} admitted by every system of the class.
inline std::vector<Generator> basic_symmetries(int m) {
  std::vector<Generator> out{P0(m)};
  for (int i = 1; i <= m; ++i) out.push_back(P(m, i));
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) out.push_back(Jrot(m, i, j));
  }
  return out;
}

struct Decomposition {
  bool ok = false;
  std::vector<Rational> coeffs;
  Generator remainder;
  bool family = false;  // remainder is a B d_U symmetry of the supplied system
};

struct ClosureOptions {
  bool adjoin_basic = true;
  const RDSystem* system = nullptr;  // enables family remainders
  int points = 0;                    // sample points; 0 picks 3 n + 8
  long max_den = 10000;
  ZeroTestOptions zero;
};

namespace detail {

inline bool is_tail_family(const Generator& r) {
  if (!proven_zero(r.eta)) return false;
  for (const auto& x : r.xi) {
    if (!proven_zero(x)) return false;
  }
  for (const auto& c : r.N().e) {
    if (!proven_zero(simplify(c))) return false;
  }
  return true;
}

}  // namespace detail

/// Writes `target` as a constant combination of `basis`: least squares at
/// sample points, rationalized, then confirmed by the zero test.
inline Decomposition decompose(const Generator& target, const std::vector<Generator>& basis,
                               const ClosureOptions& opt = {}) {
  Decomposition d;
  const std::size_t n = basis.size();
  std::set<Symbol> syms;
  auto collect = [&](const Generator& g) {
    for (const auto& c : detail::components(g)) {
      for (const auto& s : free_symbols(c)) syms.insert(s);
    }
  };
  collect(target);
  for (const auto& b : basis) collect(b);
  for (const auto& s : detail::coordinates(target.m)) syms.insert(s);
  PointSampler sampler(opt.zero.rng_seed ^ 0xa1);
  const int npts = opt.points > 0 ? opt.points : static_cast<int>(3 * n + 8);
  using MatX = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
  using VecX = Eigen::Matrix<real, Eigen::Dynamic, 1>;
  // parameters are held at one draw; callers instantiate them for the exact check
  std::map<Symbol, real> fixed = opt.zero.fixed;
  for (const auto& [s, v] : sampler.draw(syms, fixed).values) {
    if (s.kind == SymbolKind::Param) fixed[s] = v;
  }
  // full components, or only those a pure B d_U family member cannot touch (eta, xi, N)
  auto reduced = [](const Generator& g) {
    std::vector<Expr> c{g.eta};
    for (const auto& x : g.xi) c.push_back(x);
    for (const auto& e : g.N().e) c.push_back(simplify(e));
    return c;
  };
  auto fit = [&](bool family) {
    std::vector<std::vector<Expr>> comps;
    comps.push_back(family ? reduced(target) : detail::components(target));
    for (const auto& b : basis) comps.push_back(family ? reduced(b) : detail::components(b));
    const std::size_t nc = comps[0].size();
    MatX M(npts * static_cast<long>(nc), static_cast<long>(n));
    VecX rhs(npts * static_cast<long>(nc));
    for (int p = 0, row = 0; p < npts; ++p, row += static_cast<int>(nc)) {
      for (int tries = 0;; ++tries) {
        const EvalEnv env = sampler.draw(syms, fixed);
        try {
          for (std::size_t k = 0; k < nc; ++k) rhs(row + static_cast<long>(k)) = evaluate(comps[0][k], env);
          for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < nc; ++k) {
              M(row + static_cast<long>(k), static_cast<long>(j)) = evaluate(comps[j + 1][k], env);
            }
          }
          break;
        } catch (const DomainError&) {
          if (tries > 50) throw;
        }
      }
    }
    VecX x = n ? VecX(M.colPivHouseholderQr().solve(rhs)) : VecX();
    d.coeffs.clear();
    Generator rem = target;
    for (std::size_t j = 0; j < n; ++j) {
      d.coeffs.push_back(rational_approx(x(static_cast<long>(j)), opt.max_den));
      rem = rem - basis[j].scaled(Expr(d.coeffs.back()));
    }
    d.remainder = rem.simplified();
    bool zero = true;
    for (const auto& c : detail::components(d.remainder)) zero = zero && is_zero(c, opt.zero).zero();
    return zero;
  };
  if (fit(false)) {
    d.ok = true;
    return d;
  }
  if (!opt.system) return d;
  // refit ignoring the B parts; what is left over must be a member of a family
  fit(true);
  if (detail::is_tail_family(d.remainder) && is_symmetry(*opt.system, d.remainder, opt.zero)) {
    d.ok = d.family = true;
  }
  return d;
}

struct ClosureResult {
  bool closed = false;
  std::vector<Generator> basis;  // input followed by the adjoined basic symmetries
  std::size_t input_size = 0;
  // constants[i][j] are the coefficients of [e_i, e_j] in `basis`
  std::vector<std::vector<std::vector<Rational>>> constants;
  std::vector<std::pair<std::size_t, std::size_t>> family_brackets;
  std::optional<Generator> witness;
  std::pair<std::size_t, std::size_t> witness_pair{0, 0};

  std::string table() const {
    std::ostringstream os;
    auto name = [&](std::size_t i) { return basis[i].label.empty() ? "e" + std::to_string(i + 1) : basis[i].label; };
    for (std::size_t i = 0; i < constants.size(); ++i) {
      for (std::size_t j = i + 1; j < constants[i].size(); ++j) {
        std::string rhs;
        for (std::size_t k = 0; k < constants[i][j].size(); ++k) {
          const Rational& c = constants[i][j][k];
          if (c == 0) continue;
          rhs += (rhs.empty() ? "" : " + ") + (c == 1 ? "" : "(" + c.get_str() + ")") + name(k);
        }
        bool fam = false;
        for (const auto& pr : family_brackets) fam = fam || pr == std::pair{i, j};
        if (fam) rhs += (rhs.empty() ? "" : " + ") + std::string("family member");
        os << "[" << name(i) << ", " << name(j) << "] = " << (rhs.empty() ? "0" : rhs) << "\n";
      }
    }
    return os.str();
  }
};

/// Brackets every pair of `input` (plus the basic symmetries) and decomposes the
/// result; the first bracket that does not decompose is the witness.
inline ClosureResult closure_check(const std::vector<Generator>& input, const ClosureOptions& opt = {}) {
  if (input.empty()) throw SymbolicError("closure_check needs a nonempty basis");
  ClosureResult res;
  res.basis = input;
  res.input_size = input.size();
  if (opt.adjoin_basic) {
    for (const auto& b : basic_symmetries(input.front().m)) {
      // skip the ones already in the span
      ClosureOptions o = opt;
      o.system = nullptr;
      if (!decompose(b, res.basis, o).ok) res.basis.push_back(b);
    }
  }
  const std::size_t n = res.basis.size();
  res.constants.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Generator br = commutator(res.basis[i], res.basis[j]);
      const Decomposition d = decompose(br, res.basis, opt);
      if (!d.ok) {
        res.witness = br;
        res.witness_pair = {i, j};
        return res;
      }
      if (d.family) res.family_brackets.emplace_back(i, j);
      res.constants[i][j] = d.coeffs;
      for (std::size_t k = 0; k < n; ++k) res.constants[j][i][k] = -d.coeffs[k];
    }
  }
  res.closed = true;
  return res;
}

}  // namespace rdsym
