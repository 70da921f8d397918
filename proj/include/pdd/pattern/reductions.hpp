#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/pattern/pattern_tree.hpp"

namespace pdd {

// PDD-pattern instance under reduction. The tree is edited in place (vertex
// ids stay those of inst->tree); the food web is never edited and `live`
// holds the taxa whose leaves are still present.
struct PatternInstance {
  const Instance* inst = nullptr;
  std::vector<VertexId> parent;
  std::vector<Weight> weight;
  std::vector<char> alive;
  std::vector<int> color;
  TaxonSet live;
  PatternTree pattern;

  VertexId root() const { return inst->tree.root(); }
  TaxonId taxon(VertexId v) const { return inst->tree.taxon(v); }
  bool empty() const { return !alive[root()] || children()[root()].empty(); }

  std::vector<std::vector<VertexId>> children() const {
    std::vector<std::vector<VertexId>> ch(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
      if (alive[v] && parent[v] != kNoVertex) ch[parent[v]].push_back(static_cast<VertexId>(v));
    return ch;
  }

  bool is_star() const {
    auto ch = children();
    for (VertexId c : ch[root()])
      if (!ch[c].empty()) return false;
    return true;
  }

  VertexId vertex(const std::string& label) const {
    const auto& labels = inst->tree.labels();
    for (std::size_t v = 0; v < labels.size(); ++v)
      if (labels[v] == label) return static_cast<VertexId>(v);
    throw DomainError("no tree vertex labelled '" + label + "'");
  }

  // PD of S (original taxon ids) in the current tree.
  Weight pd(const TaxonSet& S) const {
    auto ch = children();
    Weight total = 0;
    std::vector<std::pair<VertexId, bool>> stack{{root(), false}};
    std::vector<char> hit(parent.size(), 0);
    if (!alive[root()]) return 0;
    while (!stack.empty()) {
      auto [v, done] = stack.back();
      stack.pop_back();
      if (!done) {
        stack.push_back({v, true});
        for (VertexId c : ch[v]) stack.push_back({c, false});
        continue;
      }
      TaxonId x = taxon(v);
      if (x != kNoTaxon && S.test(x) && live.test(x)) hit[v] = 1;
      for (VertexId c : ch[v]) hit[v] |= hit[c];
      if (hit[v] && v != root()) total = checked_add(total, weight[v]);
    }
    return total;
  }

  void remove_subtree(VertexId v, const std::vector<std::vector<VertexId>>& ch) {
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      if (!alive[u]) continue;
      alive[u] = 0;
      if (taxon(u) != kNoTaxon) live.reset(taxon(u));
      for (VertexId c : ch[u]) stack.push_back(c);
    }
  }

  // Drops non-root vertices left without any taxon below.
  void prune_barren() {
    for (bool again = true; again;) {
      again = false;
      auto ch = children();
      for (std::size_t v = 0; v < parent.size(); ++v)
        if (alive[v] && static_cast<VertexId>(v) != root() && taxon(static_cast<VertexId>(v)) == kNoTaxon &&
            ch[v].empty()) {
          alive[v] = 0;
          again = true;
        }
    }
  }
};

inline PatternInstance make_pattern_instance(const Instance& inst, const std::vector<int>& color,
                                             PatternTree pattern) {
  const PhyloTree& t = inst.tree;
  if (color.size() != t.size()) throw PreconditionError("coloring must cover every tree vertex");
  for (int c : color)
    if (c < 1) throw PreconditionError("vertex colors start at 1");
  PatternInstance p;
  p.inst = &inst;
  p.parent = t.parents();
  p.weight = t.weights();
  p.alive.assign(t.size(), 1);
  p.color = color;
  p.live = TaxonSet(inst.n());
  p.live.set();
  p.pattern = std::move(pattern);
  return p;
}

// A tree edge uv whose color pair is missing from the pattern loses desc(v).
inline bool rr_pattern_edge_original(PatternInstance& p) {
  auto pairs = p.pattern.edge_pairs();
  auto ch = p.children();
  bool changed = false;
  for (std::size_t v = 0; v < p.parent.size(); ++v) {
    VertexId u = p.parent[v];
    if (!p.alive[v] || u == kNoVertex) continue;
    if (std::binary_search(pairs.begin(), pairs.end(), std::pair{p.color[u], p.color[v]})) continue;
    p.remove_subtree(static_cast<VertexId>(v), ch);
    changed = true;
  }
  if (changed) p.prune_barren();
  return changed;
}

// For a pattern edge u'v', a tree vertex colored like u' without a child
// colored like v' loses desc(u).
inline bool rr_pattern_edge_required(PatternInstance& p) {
  bool changed = false;
  for (auto [a, b] : p.pattern.edge_pairs()) {
    auto ch = p.children();
    for (std::size_t u = 0; u < p.parent.size(); ++u) {
      if (!p.alive[u] || p.color[u] != a) continue;
      bool ok = std::any_of(ch[u].begin(), ch[u].end(), [&](VertexId v) { return p.color[v] == b; });
      if (ok) continue;
      p.remove_subtree(static_cast<VertexId>(u), ch);
      changed = true;
    }
  }
  if (changed) p.prune_barren();
  return changed;
}

// Drops live taxa that cannot be reached from a source of the web without
// passing through a taxon that left the tree.
inline bool rr_restrict_food_web(PatternInstance& p) {
  const FoodWeb& web = p.inst->web;
  TaxonSet reach(web.size());
  std::vector<TaxonId> stack;
  for (std::size_t x = 0; x < web.size(); ++x)
    if (p.live.test(x) && web.is_source(static_cast<TaxonId>(x))) {
      reach.set(x);
      stack.push_back(static_cast<TaxonId>(x));
    }
  while (!stack.empty()) {
    TaxonId x = stack.back();
    stack.pop_back();
    for (TaxonId y : web.predators(x))
      if (p.live.test(y) && !reach.test(y)) {
        reach.set(y);
        stack.push_back(y);
      }
  }
  TaxonSet R = p.live - reach;
  if (R.none()) return false;
  for_each_member(R, [&](TaxonId x) {
    p.alive[p.inst->tree.leaf(x)] = 0;
    p.live.reset(x);
  });
  p.prune_barren();
  return true;
}

inline void reduce_pattern_instance(PatternInstance& p) {
  for (;;) {
    bool a = rr_pattern_edge_original(p);
    bool b = rr_pattern_edge_required(p);
    bool c = rr_restrict_food_web(p);
    if (!a && !b && !c) return;
  }
}

// One contraction around the pattern grandchild vprime of the pattern root.
inline void contract_internal_once(PatternInstance& p, int vprime) {
  const PatternTree& P = p.pattern;
  const int uprime = P.parent(vprime);
  if (uprime == -1 || P.parent(uprime) != P.root())
    throw PreconditionError("contraction needs a grandchild of the pattern root");
  const int a = P.color(uprime), b = P.color(vprime);
  const VertexId rho = p.root();
  auto ch = p.children();
  for (std::size_t u = 0; u < p.parent.size(); ++u) {
    if (!p.alive[u] || p.color[u] != a) continue;
    if (p.parent[u] != rho) throw PreconditionError("edge reductions must be applied before contraction");
    for (VertexId v : ch[u]) {
      Weight w = p.weight[v];
      if (p.color[v] == b) w = checked_add(w, p.weight[u]);
      p.parent[v] = rho;
      p.weight[v] = w;
    }
    p.alive[u] = 0;
  }
  p.pattern = P.splice(uprime);
}

// Alternates the edge reductions with contractions until the pattern is a
// star; the smallest grandchild id is contracted first.
inline void rr_contract_internal(PatternInstance& p) {
  if (p.color[p.root()] != p.pattern.color(p.pattern.root()))
    throw PreconditionError("tree root and pattern root must share a color");
  for (;;) {
    reduce_pattern_instance(p);
    if (p.pattern.is_star()) return;
    int vprime = -1;
    for (std::size_t v = 0; v < p.pattern.size(); ++v)
      if (p.pattern.depth(static_cast<int>(v)) == 2) {
        vprime = static_cast<int>(v);
        break;
      }
    contract_internal_once(p, vprime);
  }
}

}  // namespace pdd
