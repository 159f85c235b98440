#pragma once

// Flattened double-precision evaluation of an expression at many points.
// Variables are t, x_1..x_3, u, v; R and z are derived from u, v.

#include <cmath>
#include <unordered_map>

#include "rdsym/expr.hpp"

namespace rdsym {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointArgs {
  double t = 0;
  std::array<double, 3> x{0, 0, 0};
  double u = 0, v = 0;
};

class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e) {
    std::unordered_map<const Node*, int> index;
    root_ = emit(e, index);
  }

  double operator()(const PointArgs& p) const {
    thread_local std::vector<double> reg;
    reg.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
      const Instr& in = code_[i];
      double r = 0;
      switch (in.op) {
        case Op::Const:
          r = in.c;
          break;
        case Op::T:
          r = p.t;
          break;
        case Op::X:
          r = p.x[static_cast<std::size_t>(in.a)];
          break;
        case Op::U:
          r = p.u;
          break;
        case Op::V:
          r = p.v;
          break;
        case Op::R:
          r = std::hypot(p.u, p.v);
          break;
        case Op::Z:
          r = std::atan(p.v / p.u);
          break;
        case Op::AddScaled:
          r = reg[static_cast<std::size_t>(in.a)] + in.c * reg[static_cast<std::size_t>(in.b)];
          break;
        case Op::MulPow: {
          const double base = reg[static_cast<std::size_t>(in.b)];
          const double f = in.integer ? std::pow(base, static_cast<int>(in.c)) : std::pow(base, in.c);
          r = reg[static_cast<std::size_t>(in.a)] * f;
          break;
        }
        case Op::Exp:
          r = std::exp(reg[static_cast<std::size_t>(in.a)]);
          break;
        case Op::Ln:
          r = std::log(reg[static_cast<std::size_t>(in.a)]);
          break;
        case Op::Sin:
          r = std::sin(reg[static_cast<std::size_t>(in.a)]);
          break;
        case Op::Cos:
          r = std::cos(reg[static_cast<std::size_t>(in.a)]);
          break;
        case Op::Atan:
          r = std::atan(reg[static_cast<std::size_t>(in.a)]);
          break;
      }
      reg[i] = r;
    }
    return code_.empty() ? 0.0 : reg[static_cast<std::size_t>(root_)];
  }

 private:
  enum class Op { Const, T, X, U, V, R, Z, AddScaled, MulPow, Exp, Ln, Sin, Cos, Atan };
  struct Instr {
    Op op = Op::Const;
    int a = 0, b = 0;
    double c = 0;
    bool integer = false;
  };

  int push(Instr in) {
    code_.push_back(in);
    return static_cast<int>(code_.size()) - 1;
  }

  int emit(const Expr& e, std::unordered_map<const Node*, int>& index) {
    if (auto it = index.find(e.get()); it != index.end()) return it->second;
    const Node& n = e.node();
    int out = 0;
    switch (n.kind) {
      case NodeKind::Number:
        out = push({Op::Const, 0, 0, n.num.get_d(), false});
        break;
      case NodeKind::Sym: {
        const Symbol& s = n.sym;
        if (s.kind == SymbolKind::Time) out = push({Op::T});
        else if (s.kind == SymbolKind::Space) out = push({Op::X, s.index - 1});
        else if (s.kind == SymbolKind::PolarR) out = push({Op::R});
        else if (s.kind == SymbolKind::PolarZ) out = push({Op::Z});
        else if (s.is_jet() && s.jet_order() == 0) out = push({s == Symbol::jet(1) ? Op::U : Op::V});
        else throw NumericError("cannot compile symbol " + render(e) + "; substitute parameters first");
        break;
      }
      case NodeKind::Add: {
        out = push({Op::Const, 0, 0, n.num.get_d(), false});
        for (const auto& [t, q] : n.ops) {
          const int b = emit(t, index);
          out = push({Op::AddScaled, out, b, q.get_d(), false});
        }
        break;
      }
      case NodeKind::Mul: {
        out = push({Op::Const, 0, 0, n.num.get_d(), false});
        for (const auto& [b, q] : n.ops) {
          const int bi = emit(b, index);
          out = push({Op::MulPow, out, bi, q.get_d(), is_integer(q)});
        }
        break;
      }
      case NodeKind::Func: {
        const int a = emit(n.args[0], index);
        static const std::array<Op, 5> ops{Op::Exp, Op::Ln, Op::Sin, Op::Cos, Op::Atan};
        out = push({ops[static_cast<std::size_t>(n.fn)], a});
        break;
      }
      case NodeKind::Opaque:
      case NodeKind::Psi:
        throw NumericError("cannot compile an arbitrary function; instantiate it first");
    }
    index.emplace(e.get(), out);
    return out;
  }

  std::vector<Instr> code_;
  int root_ = 0;
};

}  // namespace rdsym
