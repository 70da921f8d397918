#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding.hpp"
#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/knapsack.hpp"

namespace pdd {

struct ExtinctionItem {
  std::vector<VertexId> tops;  // roots of the doomed subtrees
  KnapsackItem item;           // cost = diversity lost, value = taxa lost
};

// Items for one 2-coloring (color[x] == 1: must survive): groups of maximal
// color-0 subtrees glued by food-web arcs among color-0 taxa, minus groups
// whose extinction would starve a color-1 taxon.
inline std::vector<ExtinctionItem> extinction_items(const Instance& inst, const std::vector<char>& color) {
  const PhyloTree& t = inst.tree;
  const FoodWeb& web = inst.web;
  const std::size_t V = t.size(), n = inst.n();
  std::vector<char> has1(V, 0);
  std::vector<std::uint64_t> cnt(V, 0);
  std::vector<Weight> below(V, 0);  // weight of the subtree strictly below v
  const auto& pre = t.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    VertexId v = *it;
    if (t.taxon(v) != kNoTaxon) {
      cnt[v] += 1;
      if (color[t.taxon(v)]) has1[v] = 1;
    }
    if (v != t.root()) {
      VertexId p = t.parent(v);
      has1[p] |= has1[v];
      cnt[p] += cnt[v];
      below[p] += below[v] + t.weight(v);
    }
  }
  // top[x]: the Z-vertex above a color-0 taxon
  std::vector<VertexId> tops;
  std::vector<int> top_index(V, -1);
  for (VertexId v : pre) {
    if (v == t.root() || has1[v] || !has1[t.parent(v)]) continue;
    top_index[v] = static_cast<int>(tops.size());
    tops.push_back(v);
  }
  std::vector<int> top_of(n, -1);
  for (VertexId v : tops)
    for (VertexId u : t.descendants(v))
      if (t.taxon(u) != kNoTaxon) top_of[t.taxon(u)] = top_index[v];

  std::vector<int> uf(tops.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  for (const Arc& a : web.arcs())
    if (!color[a.prey] && !color[a.predator] && top_of[a.prey] >= 0 && top_of[a.predator] >= 0)
      uf[find(top_of[a.prey])] = find(top_of[a.predator]);

  std::vector<char> dead(tops.size(), 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (top_of[x] < 0) continue;
    TaxonSet r = web.reachable_from(static_cast<TaxonId>(x));
    bool bad = false;
    for_each_member(r, [&](TaxonId y) { bad = bad || color[y]; });
    if (bad) dead[find(top_of[x])] = 1;
  }
  std::vector<int> slot(tops.size(), -1);
  std::vector<ExtinctionItem> items;
  for (std::size_t i = 0; i < tops.size(); ++i) {
    const int r = find(static_cast<int>(i));
    if (dead[r]) continue;
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(items.size());
      items.emplace_back();
    }
    auto& it = items[slot[r]];
    const VertexId v = tops[i];
    it.tops.push_back(v);
    it.item.value += cnt[v];
    it.item.cost += t.weight(v) + below[v];
  }
  return items;
}

// Out-forest webs (each taxon has at most one prey), by color coding over
// an (n, 3 kbar)-universal set and a knapsack per coloring.
inline Answer solve_pdd_outforest_by_kbar(const Instance& inst, const SolveOptions& opt = {},
                                          SolveStats* stats = nullptr) {
  const FoodWeb& web = inst.web;
  const std::size_t n = inst.n();
  for (std::size_t x = 0; x < n; ++x)
    if (web.prey(static_cast<TaxonId>(x)).size() > 1)
      throw PreconditionError("the out-forest solver needs every taxon to have at most one prey");
  if (inst.D == 0) return make_solution(inst, TaxonSet(n));
  TaxonSet all(n);
  all.set();
  const Weight total = pd(inst.tree, all);
  if (inst.k >= n) return total >= inst.D ? Answer(make_solution(inst, all)) : std::nullopt;
  if (total < inst.D) return std::nullopt;
  const std::size_t kbar = n - static_cast<std::size_t>(inst.k);
  const std::size_t width = std::min(3 * kbar, n);
  const std::uint64_t per = detail::sat_mul(n + 1, detail::sat_mul(n + 1, kbar + 1));
  UniversalSet u = build_universal_set(n, width, opt.mode, opt.seed, opt.epsilon, opt.budget / per + 1);
  if (detail::sat_mul(u.sets.size(), per) > opt.budget)
    throw BudgetExceeded("out-forest search over " + std::to_string(u.sets.size()) + " colorings");
  for (const auto& A : u.sets) {
    if (stats) {
      ++stats->colorings;
      ++stats->dp_runs;
    }
    auto items = extinction_items(inst, A);
    std::vector<KnapsackItem> ks;
    for (const auto& it : items) ks.push_back(it.item);
    auto pick = knapsack_decide(ks, total - inst.D, kbar);
    if (!pick) continue;
    TaxonSet S = all;
    for (std::size_t i : *pick)
      for (VertexId v : items[i].tops)
        for (VertexId w : inst.tree.descendants(v))
          if (inst.tree.taxon(w) != kNoTaxon) S.reset(inst.tree.taxon(w));
    if (!is_solution(inst, S)) throw std::logic_error("out-forest solver produced an invalid witness");
    return make_solution(inst, S);
  }
  return std::nullopt;
}

}  // namespace pdd
