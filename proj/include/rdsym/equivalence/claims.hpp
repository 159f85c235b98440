#pragma once

// Verification of the AET column of the catalog: the transformation keeps the
// form of the system under its guard and breaks it off-guard.

#include "rdsym/catalog/verify.hpp"
#include "rdsym/equivalence/transform.hpp"

namespace rdsym {

inline std::string aet_name(const AetClaimSpec& c) {
  std::string out = "AET ";
  for (std::size_t i = 0; i < c.ids.size(); ++i) out += (i ? " & " : "") + std::to_string(c.ids[i]);
  return out;
}

inline std::vector<AetStep> aet_steps(const AetClaimSpec& c, const Instance& in, std::mt19937_64& rng) {
  static const std::array<Rational, 6> omegas{Rational(1, 2), Rational(-1, 3), Rational(2, 3),
                                              Rational(3, 4), Rational(-5, 4), Rational(1, 5)};
  std::vector<AetStep> steps;
  for (int id : c.ids) {
    AetStep s;
    s.id = id;
    s.omega = Expr(omegas[std::uniform_int_distribution<std::size_t>(0, omegas.size() - 1)(rng)]);
    for (const auto& [k, v] : c.bind) {
      const Expr val(value_at(v, in.ctx, in.point));
      if (k == "nu") s.nu = val;
      else if (k == "sigma") s.sigma = val;
      else if (k == "lambda") s.lambda = val;
      else throw CatalogError("unknown AET parameter '" + k + "'");
    }
    steps.push_back(s);
  }
  return steps;
}

inline std::string render_steps(const std::vector<AetStep>& steps) {
  std::string out;
  for (const auto& s : steps) {
    out += (out.empty() ? "" : "; ") + std::to_string(s.id) + "(omega=" + render(s.omega);
    if (s.id == 6) out += ", nu=" + render(s.nu) + ", sigma=" + render(s.sigma);
    if (s.id == 7) out += ", sigma=" + render(s.sigma);
    if (s.id == 8) out += ", lambda=" + render(s.lambda);
    out += ")";
  }
  return out;
}

inline EntryReport verify_aet_claims(const Catalog& cat, const CatalogEntry& e, const VerifyOptions& opt = {}) {
  EntryReport rep;
  rep.id = e.id;
  std::mt19937_64 rng(opt.seed ^ (std::hash<std::string>{}(e.id) + 3));
  const std::vector<std::string> fchoices =
      detail::uses_functions(e) ? std::vector<std::string>{"opaque", "power"} : std::vector<std::string>{"opaque"};
  for (const auto& c : e.aets) {
    const std::string subject = aet_name(c) + " if " + render(c.solved);
    for (int m : opt.dims) {
      for (int s = 0; s < opt.samples; ++s) {
        const auto p = draw_point(e, m, c.solved, rng);
        if (!p) {
          rep.records.push_back({e.id, "aet+", subject, m, "", "", false, "no admissible point"});
          break;
        }
        for (const auto& fc : fchoices) {
          const Instance in = instantiate(cat, e, *p, m, fc);
          const auto steps = aet_steps(c, in, rng);
          CheckRecord r{e.id, "aet+", subject, m, fc, render_point(*p), false, render_steps(steps)};
          try {
            const RDSystem out = apply(EquivTransform::aet(steps), in.sys, opt.zero);
            r.passed = true;
          } catch (const FormNotPreserved& ex) {
            r.detail += ": " + std::string(ex.what()) + ", term " + render(ex.term()).substr(0, 200);
          } catch (const std::exception& ex) {
            r.detail += ": " + std::string(ex.what());
          }
          rep.records.push_back(r);
        }
      }
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
          rep.records.push_back({e.id, "aet-", vsub, m, "opaque", "", true, "no admissible violating point"});
          continue;
        }
        const Instance in = instantiate(cat, e, *p, m);
        const auto steps = aet_steps(c, in, rng);
        CheckRecord r{e.id, "aet-", vsub, m, "opaque", render_point(*p), false, render_steps(steps)};
        try {
          apply(EquivTransform::aet(steps), in.sys, opt.zero);
          r.detail += ": form preserved off-guard";
        } catch (const FormNotPreserved& ex) {
          r.passed = true;
          r.detail += ": " + std::string(ex.what());
        }
        rep.records.push_back(r);
      }
    }
  }
  return rep;
}

}  // namespace rdsym
