#pragma once

// Independent reference implementations used only by the tests. They share
// no code with the library beyond the data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/io/instance_format.hpp"

namespace pdd::testing {

inline Instance make(const std::string& newick, const std::string& web, std::uint64_t k, Weight D) {
  return io::parse_instance(newick, web, k, D);
}

// Star {a:3,b:5,c:2} with a -> b.
inline Instance instance_a(std::uint64_t k = 2, Weight D = 8) { return make("(a:3,b:5,c:2)r;", "a b", k, D); }

inline std::vector<std::uint64_t> subset_masks(std::size_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.push_back(m);
  return out;
}

inline TaxonSet from_mask(std::size_t n, std::uint64_t m) {
  TaxonSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (m >> i & 1) s.set(i);
  return s;
}

// Sum over edges whose subtree holds a chosen leaf, computed bottom-up.
inline Weight ref_pd(const PhyloTree& t, std::uint64_t mask) {
  Weight total = 0;
  std::function<bool(VertexId)> rec = [&](VertexId v) {
    bool hit = t.taxon(v) != kNoTaxon && (mask >> t.taxon(v) & 1);
    for (VertexId c : t.children(v)) hit = rec(c) || hit;
    if (hit && v != t.root()) total += t.weight(v);
    return hit;
  };
  rec(t.root());
  return total;
}

inline bool ref_viable(const FoodWeb& web, std::uint64_t mask) {
  for (std::size_t x = 0; x < web.size(); ++x) {
    if (!(mask >> x & 1)) continue;
    bool has_prey = false, fed = false;
    for (const Arc& a : web.arcs())
      if (a.predator == static_cast<TaxonId>(x)) {
        has_prey = true;
        if (mask >> a.prey & 1) fed = true;
      }
    if (has_prey && !fed) return false;
  }
  return true;
}

struct RefOptimum {
  Weight value = 0;
  std::uint64_t witness = 0;
};

// Every subset of size at most k.
inline RefOptimum ref_optimum(const Instance& inst) {
  const std::size_t n = inst.n();
  RefOptimum best;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(m)) > inst.k) continue;
    if (!ref_viable(inst.web, m)) continue;
    Weight v = ref_pd(inst.tree, m);
    if (v > best.value) best = {v, m};
  }
  return best;
}

// best[s]: maximum PD over viable sets of size at most s.
inline std::vector<Weight> ref_best_by_size(const Instance& inst) {
  const std::size_t n = inst.n();
  std::vector<std::uint64_t> prey(n, 0);
  for (const Arc& a : inst.web.arcs()) prey[a.predator] |= std::uint64_t{1} << a.prey;
  std::vector<Weight> best(n + 1, 0);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      if ((m >> x & 1) && prey[x] && !(prey[x] & m)) ok = false;
    if (!ok) continue;
    const std::size_t s = static_cast<std::size_t>(__builtin_popcountll(m));
    best[s] = std::max(best[s], ref_pd(inst.tree, m));
  }
  for (std::size_t s = 1; s <= n; ++s) best[s] = std::max(best[s], best[s - 1]);
  return best;
}

inline bool ref_decide(const Instance& inst) { return ref_optimum(inst).value >= inst.D; }

inline bool ref_is_solution(const Instance& inst, const TaxonSet& S) {
  if (S.size() != inst.n() || S.count() > inst.k) return false;
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < inst.n(); ++i)
    if (S.test(i)) m |= std::uint64_t{1} << i;
  return ref_viable(inst.web, m) && ref_pd(inst.tree, m) >= inst.D;
}

// Exact decision for up to 64 taxa: include/exclude in topological order,
// a taxon only once one of its prey is in, pruned by the sum of the largest
// marginal gains (PD is submodular).
inline bool ref_search_decide(const Instance& inst) {
  const std::size_t n = inst.n();
  const PhyloTree& t = inst.tree;
  if (inst.D == 0) return true;
  std::vector<std::vector<TaxonId>> prey(n);
  std::vector<int> indeg(n, 0);
  for (const Arc& a : inst.web.arcs()) {
    prey[a.predator].push_back(a.prey);
    ++indeg[a.predator];
  }
  std::vector<TaxonId> order;
  for (std::size_t x = 0; x < n; ++x)
    if (indeg[x] == 0) order.push_back(static_cast<TaxonId>(x));
  for (std::size_t h = 0; h < order.size(); ++h)
    for (const Arc& a : inst.web.arcs())
      if (a.prey == order[h] && --indeg[a.predator] == 0) order.push_back(a.predator);
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, n);
  std::vector<char> covered(t.size(), 0);
  std::function<bool(std::size_t, std::uint64_t, std::uint64_t, Weight)> go = [&](std::size_t i, std::uint64_t mask,
                                                                                std::uint64_t size, Weight value) {
    if (value >= inst.D) return true;
    if (i == n || size == k) return false;
    std::fill(covered.begin(), covered.end(), 0);
    covered[t.root()] = 1;
    for (std::size_t x = 0; x < n; ++x)
      if (mask >> x & 1)
        for (VertexId v = t.leaf(static_cast<TaxonId>(x)); !covered[v]; v = t.parent(v)) covered[v] = 1;
    std::vector<Weight> gains;
    for (std::size_t j = i; j < n; ++j) {
      Weight g = 0;
      for (VertexId v = t.leaf(order[j]); !covered[v]; v = t.parent(v)) g += t.weight(v);
      gains.push_back(g);
    }
    std::sort(gains.rbegin(), gains.rend());
    Weight bound = value;
    for (std::size_t j = 0; j < gains.size() && j < k - size; ++j) bound += gains[j];
    if (bound < inst.D) return false;
    const TaxonId x = order[i];
    bool fed = prey[x].empty();
    for (TaxonId p : prey[x]) fed = fed || (mask >> p & 1);
    if (fed) {
      Weight g = 0;
      for (VertexId v = t.leaf(x); !covered[v]; v = t.parent(v)) g += t.weight(v);
      if (go(i + 1, mask | std::uint64_t{1} << x, size + 1, value + g)) return true;
    }
    return go(i + 1, mask, size, value);
  };
  return go(0, 0, 0, 0);
}

// Colors of the example pattern instance with the orange/yellow contraction.
enum FigureColor { red = 1, blue, green, orange, dark_green, cyan, yellow, gray };

struct FigureOne {
  Instance inst;
  std::vector<int> color;  // per tree vertex
  std::vector<int> pattern_parent;
  std::vector<int> pattern_color;
};

// Tree with unary vertices, so it is assembled directly instead of parsed.
inline FigureOne figure_one(std::uint64_t k = 4, Weight D = 22) {
  struct Row {
    const char* label;
    VertexId parent;
    Weight w;
    int color;
  };
  const std::vector<Row> rows = {
      {"rho", kNoVertex, 0, red}, {"c1", 0, 6, blue},       {"c11", 1, 4, dark_green}, {"c4", 0, 1, blue},
      {"c41", 3, 5, dark_green},  {"c42", 3, 2, dark_green}, {"c2", 0, 3, green},        {"c3", 0, 1, orange},
      {"c30", 7, 4, cyan},        {"c31", 7, 2, cyan},       {"c32", 7, 3, yellow},      {"c321", 10, 1, gray},
      {"c322", 10, 1, gray},      {"c5", 0, 2, orange},      {"c51", 13, 2, cyan},       {"c52", 13, 2, yellow},
      {"c521", 15, 2, gray}};
  std::vector<VertexId> par;
  std::vector<Weight> w;
  std::vector<TaxonId> tx(rows.size(), kNoTaxon);
  std::vector<std::string> labels;
  FigureOne f;
  std::vector<char> internal(rows.size(), 0);
  for (const Row& r : rows)
    if (r.parent != kNoVertex) internal[r.parent] = 1;
  for (std::size_t v = 0; v < rows.size(); ++v) {
    par.push_back(rows[v].parent);
    w.push_back(rows[v].w);
    labels.push_back(rows[v].label);
    f.color.push_back(rows[v].color);
    if (!internal[v]) {
      tx[v] = static_cast<TaxonId>(f.inst.names.size());
      f.inst.names.push_back(rows[v].label);
    }
  }
  const std::size_t n = f.inst.names.size();
  f.inst.tree = PhyloTree(par, w, tx, n, PhyloTree::Arity::relaxed, labels);
  f.inst.web = FoodWeb(n, {});
  f.inst.k = k;
  f.inst.D = D;
  f.pattern_parent = {-1, 0, 0, 0, 1, 3, 3, 6};
  f.pattern_color = {red, blue, green, orange, dark_green, cyan, yellow, gray};
  return f;
}

// Vertices of the spanning tree of S and the root: those with a chosen leaf
// below, plus the root.
inline std::vector<char> ref_spanning_vertices(const std::vector<VertexId>& parent, const std::vector<char>& alive,
                                               const std::vector<TaxonId>& taxon, VertexId root,
                                               const TaxonSet& S) {
  std::vector<char> in(parent.size(), 0);
  in[root] = 1;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (!alive[v] || taxon[v] == kNoTaxon || !S.test(taxon[v])) continue;
    for (VertexId u = static_cast<VertexId>(v); u != kNoVertex && !in[u]; u = parent[u]) in[u] = 1;
  }
  return in;
}

// Spanning tree colorful and with exactly the pattern's edge color pairs.
inline bool ref_respects(const std::vector<VertexId>& parent, const std::vector<char>& alive,
                         const std::vector<TaxonId>& taxon, const std::vector<int>& color, VertexId root,
                         const std::vector<int>& pparent, const std::vector<int>& pcolor, const TaxonSet& S) {
  auto in = ref_spanning_vertices(parent, alive, taxon, root, S);
  std::vector<int> seen;
  std::vector<std::pair<int, int>> a, b;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (!in[v]) continue;
    if (std::find(seen.begin(), seen.end(), color[v]) != seen.end()) return false;
    seen.push_back(color[v]);
    if (static_cast<VertexId>(v) != root) a.push_back({color[parent[v]], color[v]});
  }
  for (std::size_t v = 0; v < pparent.size(); ++v)
    if (pparent[v] != -1) b.push_back({pcolor[pparent[v]], pcolor[v]});
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

}  // namespace pdd::testing
