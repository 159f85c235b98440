#pragma once

// Closure of the symmetry set listed for a catalog entry: basic + main + the
// additional symmetries whose guards hold at the drawn point.

#include "rdsym/algebra/lie.hpp"
#include "rdsym/catalog/verify.hpp"

namespace rdsym {

inline std::vector<Generator> listed_symmetries(const Instance& in) {
  std::vector<Generator> out = in.main();
  for (const auto& c : in.entry->additional) {
    if (!holds(c.guard, in.ctx, in.point) || !holds(c.solved, in.ctx, in.point)) continue;
    for (auto& g : in.claim_generators(c)) out.push_back(std::move(g));
  }
  return out;
}

struct EntryClosure {
  std::string id;
  int m = 1;
  std::string point;
  ClosureResult result;
};

/// Draws a point (under `extra`) and checks closure of the listed set there.
inline EntryClosure entry_closure(const Catalog& cat, const CatalogEntry& e, int m, std::mt19937_64& rng,
                                  const Conjunction& extra = {}) {
  const auto p = draw_point(e, m, extra, rng);
  if (!p) throw CatalogError("entry " + e.id + ": no admissible point");
  const Instance in = instantiate(cat, e, *p, m);
  ClosureOptions opt;
  opt.system = &in.sys;
  EntryClosure out{e.id, m, render_point(*p), closure_check(listed_symmetries(in), opt)};
  return out;
}

}  // namespace rdsym
