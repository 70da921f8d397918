#pragma once

#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

struct SourceTransform {
  Instance instance;
  TaxonId star = kNoTaxon;  // id of the added source; original ids are unchanged
};

inline std::string fresh_name(const std::vector<std::string>& names, const std::string& base) {
  std::string cand = base;
  for (int i = 1;; ++i) {
    bool clash = false;
    for (const auto& s : names)
      if (s == cand) {
        clash = true;
        break;
      }
    if (!clash) return cand;
    cand = base + std::to_string(i);
  }
}

// Adds a new taxon feeding every original source, hung below the root with
// weight D+1; k grows by one and D becomes 2D+1.
inline SourceTransform single_source_transform(const Instance& inst) {
  const std::size_t n = inst.n();
  Weight star_weight = checked_add(inst.D, 1);
  Weight new_D = checked_add(checked_mul(inst.D, 2), 1);
  SourceTransform out;
  out.star = static_cast<TaxonId>(n);
  TreeEditor ed(inst.tree);
  ed.add_vertex(ed.root(), star_weight, out.star, "");
  std::vector<TaxonId> map(n + 1);
  for (std::size_t x = 0; x <= n; ++x) map[x] = static_cast<TaxonId>(x);
  out.instance.tree = ed.build(n + 1, map, PhyloTree::Arity::relaxed).tree;
  std::vector<Arc> arcs = inst.web.arcs();
  for (std::size_t x = 0; x < n; ++x)
    if (inst.web.is_source(static_cast<TaxonId>(x))) arcs.push_back({out.star, static_cast<TaxonId>(x)});
  out.instance.web = FoodWeb(n + 1, std::move(arcs));
  out.instance.names = inst.names;
  out.instance.names.push_back(fresh_name(inst.names, "*"));
  out.instance.k = inst.k + 1;
  out.instance.D = new_D;
  return out;
}

// Drops the added source from a set over the transformed instance.
inline TaxonSet strip_star(const TaxonSet& S, const SourceTransform& t) {
  TaxonSet out(static_cast<std::size_t>(t.star));
  for_each_member(S, [&](TaxonId x) {
    if (x != t.star) out.set(x);
  });
  return out;
}

// Reachability: a taxon at hop distance >= k from every source is in no solution.
inline Restricted rr_reachability_prune(const Instance& inst) {
  auto dist = inst.web.source_distances();
  TaxonSet keep(inst.n());
  for (std::size_t x = 0; x < inst.n(); ++x)
    if (dist[x] < inst.k) keep.set(x);
  return restrict_taxa(inst, keep);
}

inline bool reachability_pruned(const Instance& inst) {
  auto dist = inst.web.source_distances();
  for (std::size_t d : dist)
    if (d >= inst.k) return false;
  return true;
}

// Heavy edge: after the reachability pass every taxon can be saved within k,
// so one heavy edge already reaches D.
inline Answer rr_heavy_edge_accept(const Instance& inst) {
  if (!reachability_pruned(inst))
    throw PreconditionError("heavy-edge rule applied before the reachability prune");
  if (inst.D == 0) return Solution{TaxonSet(inst.n()), 0, std::vector<Arc>{}};
  if (inst.tree.max_weight() < inst.D) return std::nullopt;
  const auto dist = inst.web.source_distances();
  TaxonId best = kNoTaxon;
  for (VertexId v : inst.tree.preorder()) {
    if (v == inst.tree.root() || inst.tree.weight(v) < inst.D) continue;
    for_each_member(inst.tree.offspring(v), [&](TaxonId x) {
      if (best == kNoTaxon || dist[x] < dist[best] || (dist[x] == dist[best] && x < best)) best = x;
    });
    break;
  }
  // shortest path back to a source
  TaxonSet S(inst.n());
  TaxonId x = best;
  S.set(x);
  while (dist[x] > 0) {
    TaxonId next = kNoTaxon;
    for (TaxonId p : inst.web.prey(x))
      if (dist[p] + 1 == dist[x]) {
        next = p;
        break;
      }
    x = next;
    S.set(x);
  }
  return make_solution(inst, S);
}

// Redundant prey: an arc v->w is redundant when every prey of the non-source v also
// feeds w. Applied until no arc qualifies.
inline Instance rr_redundant_prey(const Instance& inst) {
  const std::size_t n = inst.n();
  std::vector<std::set<TaxonId>> prey(n);
  for (const Arc& a : inst.web.arcs()) prey[a.predator].insert(a.prey);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t w = 0; w < n; ++w) {
      for (auto it = prey[w].begin(); it != prey[w].end();) {
        TaxonId v = *it;
        bool redundant = !prey[v].empty();
        for (TaxonId u : prey[v])
          if (!prey[w].count(u)) {
            redundant = false;
            break;
          }
        if (redundant) {
          it = prey[w].erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }
  std::vector<Arc> arcs;
  for (std::size_t w = 0; w < n; ++w)
    for (TaxonId v : prey[w]) arcs.push_back({v, static_cast<TaxonId>(w)});
  Instance out = inst;
  out.web = FoodWeb(n, std::move(arcs));
  return out;
}

struct PreprocessReport {
  std::vector<TaxonId> removed_taxa;  // original ids
  std::vector<Arc> removed_arcs;      // in reduced ids
  bool single_source = false;
  Answer early;  // original coordinates
  std::vector<TaxonId> origin;
};

struct Preprocessed {
  Instance instance;
  PreprocessReport report;
};

// Reachability, then heavy edge (may decide), then optionally redundant prey.
inline Preprocessed preprocess(const Instance& inst, bool redundant_prey = true) {
  Preprocessed out;
  Restricted r = rr_reachability_prune(inst);
  out.report.origin = r.origin;
  TaxonSet kept(inst.n());
  for (TaxonId x : r.origin) kept.set(x);
  for (std::size_t x = 0; x < inst.n(); ++x)
    if (!kept.test(x)) out.report.removed_taxa.push_back(static_cast<TaxonId>(x));
  if (Answer a = rr_heavy_edge_accept(r.instance)) {
    TaxonSet S = lift(a->taxa, r.origin, inst.n());
    out.report.early = make_solution(inst, S);
  }
  out.instance = std::move(r.instance);
  if (redundant_prey) {
    Instance reduced = rr_redundant_prey(out.instance);
    for (const Arc& a : out.instance.web.arcs())
      if (!reduced.web.has_arc(a.prey, a.predator)) out.report.removed_arcs.push_back(a);
    out.instance = std::move(reduced);
  }
  return out;
}

}  // namespace pdd
