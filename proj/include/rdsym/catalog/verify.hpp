#pragma once

// End-to-end verification of catalog entries: main symmetries against both the
// classifying equation and the prolongation oracle, guard sharpness of the
// conditional symmetries, extension flags and perturbation witnesses.

#include <sstream>

#include "rdsym/catalog/catalog.hpp"

namespace rdsym {

struct CheckRecord {
  std::string entry;
  std::string check;  // main, flags, guard+, guard-, perturb
  std::string subject;
  int m = 0;
  std::string fchoice;
  std::string point;
  bool passed = false;
  std::string detail;
};

inline nlohmann::json to_json(const CheckRecord& r) {
  return {{"entry", r.entry}, {"check", r.check}, {"subject", r.subject}, {"m", r.m},     {"fchoice", r.fchoice},
          {"point", r.point}, {"passed", r.passed}, {"detail", r.detail}};
}

struct EntryReport {
  std::string id;
  std::vector<CheckRecord> records;

  bool ok() const {
    for (const auto& r : records) {
      if (!r.passed) return false;
    }
    return true;
  }
  std::size_t count(const std::string& check, bool passed) const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.check == check && r.passed == passed;
    return n;
  }
};

struct VerifyOptions {
  std::vector<int> dims{1, 2, 3};
  int samples = 5;
  std::uint64_t seed = 7;
  bool main = true;
  bool guards = true;
  bool perturb = true;
  ZeroTestOptions zero;
};

namespace detail {

inline std::string verdict_text(const PairVerdict& v) {
  std::ostringstream os;
  os << to_string(v.component[0].kind) << "," << to_string(v.component[1].kind);
  for (const auto& c : v.component) {
    if (c.kind == ZeroKind::NonZero) {
      os << " witness value " << static_cast<double>(c.value);
      break;
    }
  }
  return os.str();
}

inline bool uses_functions(const CatalogEntry& e) {
  return e.f1.find("F1(") != std::string::npos || e.f1.find("F2(") != std::string::npos ||
         e.f2.find("F1(") != std::string::npos || e.f2.find("F2(") != std::string::npos;
}

struct ExpectedFlags {
  bool galilei = false;
  std::optional<Rational> gamma;
  bool conformal = false;
};

inline ExpectedFlags expected_flags(const Instance& in) {
  ExpectedFlags x;
  for (const auto& c : in.entry->additional) {
    if (!holds(c.guard, in.ctx, in.point) || !holds(c.solved, in.ctx, in.point)) continue;
    if (c.name == "G" || c.name == "K") x.galilei = true;
    if (c.name == "K") x.conformal = true;
    if (c.name == "Ghat") x.gamma = in.gamma(c);
  }
  return x;
}

inline CheckRecord flags_record(const Instance& in, const ZeroTestOptions& zopt) {
  CheckRecord r{in.entry->id, "flags", "extension_conditions", in.m, in.fchoice, render_point(in.point), false, ""};
  const ExtensionFlags fl = extension_conditions(in.sys, zopt);
  const ExpectedFlags ex = expected_flags(in);
  bool gamma_ok = fl.gamma.has_value() == ex.gamma.has_value();
  if (gamma_ok && ex.gamma) gamma_ok = proven_zero(*fl.gamma - Expr(*ex.gamma));
  r.passed = fl.galilei == ex.galilei && fl.conformal == ex.conformal && gamma_ok;
  std::ostringstream os;
  os << "galilei=" << fl.galilei << "/" << ex.galilei << " conformal=" << fl.conformal << "/" << ex.conformal
     << " gamma=" << (fl.gamma ? render(*fl.gamma) : "none") << "/" << (ex.gamma ? ex.gamma->get_str() : "none");
  r.detail = os.str();
  return r;
}

}  // namespace detail

/// Verdict of a single generator: oracle and classifying equation must agree on zero.
struct SymmetryCheck {
  PairVerdict oracle, classifying;
  bool structure = false;
  bool passed() const { return oracle.zero() && classifying.zero() && structure; }
};

inline SymmetryCheck check_symmetry(const RDSystem& sys, const Generator& X, const ZeroTestOptions& opt = {}) {
  SymmetryCheck c;
  c.oracle = verdict(invariance_residual(sys, X), opt);
  c.classifying = verdict(classifying_general(sys, X), opt);
  c.structure = check_structure(X, sys.A, opt).ok();
  return c;
}

inline void verify_main(const Catalog& cat, const CatalogEntry& e, const VerifyOptions& opt, EntryReport& rep) {
  std::mt19937_64 rng(opt.seed ^ std::hash<std::string>{}(e.id));
  std::vector<std::string> fchoices{"opaque"};
  if (detail::uses_functions(e)) {
    for (const auto& f : cat.fchoice_names()) fchoices.push_back(f);
  }
  for (int m : opt.dims) {
    for (int s = 0; s < opt.samples; ++s) {
      const auto p = draw_point(e, m, {}, rng);
      if (!p) {
        rep.records.push_back({e.id, "main", "sampling", m, "", "", false, "no admissible point"});
        continue;
      }
      for (const auto& fc : fchoices) {
        const Instance in = instantiate(cat, e, *p, m, fc);
        for (const auto& g : in.main()) {
          const SymmetryCheck c = check_symmetry(in.sys, g, opt.zero);
          rep.records.push_back({e.id, "main", g.label, m, fc, render_point(*p), c.passed(),
                                 "oracle " + detail::verdict_text(c.oracle) + "; classifying " +
                                     detail::verdict_text(c.classifying) +
                                     (c.structure ? "" : "; structure equations fail")});
        }
        if (fc == "opaque") rep.records.push_back(detail::flags_record(in, opt.zero));
      }
    }
  }
}

inline void verify_guards(const Catalog& cat, const CatalogEntry& e, const VerifyOptions& opt, EntryReport& rep) {
  std::mt19937_64 rng(opt.seed ^ (std::hash<std::string>{}(e.id) + 1));
  for (std::size_t ci = 0; ci < e.additional.size(); ++ci) {
    const ClaimSpec& c = e.additional[ci];
    const std::string subject = c.name + " if " + render(c.solved);
    for (int m : opt.dims) {
      // guard holds
      for (int s = 0; s < opt.samples; ++s) {
        const auto p = draw_point(e, m, c.solved, rng);
        if (!p) {
          rep.records.push_back({e.id, "guard+", subject, m, "opaque", "", false, "no admissible point"});
          break;
        }
        const Instance in = instantiate(cat, e, *p, m);
        if (!holds(c.guard, in.ctx, *p)) {
          rep.records.push_back({e.id, "guard+", subject, m, "opaque", render_point(*p), false,
                                 "solved form does not imply the tabulated guard"});
          continue;
        }
        bool all = true;
        std::string detail;
        for (const auto& g : in.claim_generators(c)) {
          const SymmetryCheck sc = check_symmetry(in.sys, g, opt.zero);
          if (!sc.passed()) {
            all = false;
            detail += g.label + ": oracle " + detail::verdict_text(sc.oracle) + "; ";
          }
        }
        if (c.gamma) detail += "gamma=" + in.gamma(c)->get_str();
        rep.records.push_back({e.id, "guard+", subject, m, "opaque", render_point(*p), all, detail});
        rep.records.push_back(detail::flags_record(in, opt.zero));
      }
      // one atom violated at a time
      for (std::size_t k = 0; k < c.solved.size(); ++k) {
        const auto bad = violate(c.solved, k, e, rng);
        if (!bad) continue;
        const std::string vsub = subject + " [violate " + c.solved[k].src + "]";
        std::optional<ParamPoint> p;
        for (int tries = 0; tries < 20 && !p; ++tries) {
          p = draw_point(e, m, *bad, rng);
          if (p && holds(c.guard, detail::entry_context(e, m), *p)) p.reset();
        }
        if (!p) {
          // e.g. the violation makes the source linear; nothing to witness
          rep.records.push_back({e.id, "guard-", vsub, m, "opaque", "", true, "no admissible violating point"});
          continue;
        }
        const Instance in = instantiate(cat, e, *p, m);
        std::optional<Rational> gamma_override;
        if (c.gamma && in.gamma(c) == 0) gamma_override = Rational(1);
        bool some_fail = false;
        std::string detail;
        for (const auto& g : in.claim_generators(c, gamma_override)) {
          const PairVerdict v = verdict(invariance_residual(in.sys, g), opt.zero);
          if (!v.zero()) {
            some_fail = true;
            detail = g.label + ": " + detail::verdict_text(v);
            break;
          }
        }
        if (!some_fail) detail = "all generators still pass off-guard";
        rep.records.push_back({e.id, "guard-", vsub, m, "opaque", render_point(*p), some_fail, detail});
        rep.records.push_back(detail::flags_record(in, opt.zero));
      }
    }
  }
}

inline void verify_perturbation(const Catalog& cat, const CatalogEntry& e, const VerifyOptions& opt,
                                EntryReport& rep) {
  std::mt19937_64 rng(opt.seed ^ (std::hash<std::string>{}(e.id) + 2));
  const int m = opt.dims.empty() ? 1 : opt.dims.front();
  const auto p = draw_point(e, m, {}, rng);
  if (!p) return;
  const Instance in = instantiate(cat, e, *p, m, "opaque", e.perturb);
  for (const auto& g : in.main()) {
    const PairVerdict v = verdict(invariance_residual(in.sys, g), opt.zero);
    rep.records.push_back({e.id, "perturb", g.label + " with f += (" + e.perturb.first + ", " + e.perturb.second + ")",
                           m, "opaque", render_point(*p), !v.zero(), detail::verdict_text(v)});
  }
}

inline EntryReport verify_entry(const Catalog& cat, const CatalogEntry& e, const VerifyOptions& opt = {}) {
  EntryReport rep;
  rep.id = e.id;
  try {
    if (opt.main) verify_main(cat, e, opt, rep);
    if (opt.guards) verify_guards(cat, e, opt, rep);
    if (opt.perturb) verify_perturbation(cat, e, opt, rep);
  } catch (const std::exception& ex) {
    rep.records.push_back({e.id, "error", "", 0, "", "", false, ex.what()});
  }
  return rep;
}

/// A view restricts an entry; samples must show the expected extension flags and
/// keep the entry's main symmetries.
inline EntryReport verify_view(const Catalog& cat, const CatalogView& v, const VerifyOptions& opt = {}) {
  EntryReport rep;
  rep.id = v.name;
  const CatalogEntry& e = cat.entry(v.entry);
  std::mt19937_64 rng(opt.seed ^ (std::hash<std::string>{}(v.name) + 5));
  Conjunction extra = v.assign;
  extra.insert(extra.end(), v.filter.begin(), v.filter.end());
  for (int m : opt.dims) {
    for (int s = 0; s < opt.samples; ++s) {
      const auto p = draw_point(e, m, extra, rng);
      if (!p) {
        rep.records.push_back({v.name, "view", v.entry, m, "opaque", "", false, "no admissible point"});
        break;
      }
      const Instance in = instantiate(cat, e, *p, m);
      const ExtensionFlags fl = extension_conditions(in.sys, opt.zero);
      std::ostringstream os;
      bool ok = true;
      for (const auto& [k, want] : v.expect) {
        bool got = false;
        if (k == "galilei") got = fl.galilei;
        else if (k == "conformal") got = fl.conformal;
        else if (k == "exp_galilei") got = fl.gamma.has_value();
        else throw CatalogError("view " + v.name + ": unknown flag '" + k + "'");
        ok = ok && got == want;
        os << k << "=" << got << "/" << want << " ";
      }
      for (const auto& g : in.main()) {
        const SymmetryCheck c = check_symmetry(in.sys, g, opt.zero);
        if (!c.passed()) {
          ok = false;
          os << g.label << " fails; ";
        }
      }
      rep.records.push_back({v.name, "view", v.entry, m, "opaque", render_point(*p), ok, os.str()});
    }
  }
  return rep;
}

}  // namespace rdsym
