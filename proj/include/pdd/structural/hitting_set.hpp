#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding/families.hpp"
#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"

namespace pdd {

// Hitting Set with Tree Profits: S over the tree's taxa with |S| <= k that
// meets every member of the family, maximising PD(S).
struct HittingSetInstance {
  PhyloTree tree;
  std::vector<TaxonSet> family;
  std::uint64_t k = 0;
  Weight D = 0;
};

namespace detail {

using HsTable = std::vector<std::vector<std::int64_t>>;  // [size][mask], at-least masks

inline std::uint64_t hs_cost(std::size_t q, std::size_t n, std::uint64_t k) {
  const std::uint64_t kk = std::min<std::uint64_t>(k, n) + 1;
  return sat_mul(sat_mul(pow3(q), n + 1), sat_mul(kk, kk));
}

}  // namespace detail

inline std::optional<Selection> max_pd_hitting_set(const HittingSetInstance& hs, const SolveOptions& opt = {}) {
  const PhyloTree& t = hs.tree;
  const std::size_t n = t.num_taxa();
  const std::size_t q = hs.family.size();
  if (q > 24) throw BudgetExceeded("hitting set family of size " + std::to_string(q));
  for (const TaxonSet& f : hs.family) {
    if (f.size() != n) throw DomainError("family member over the wrong universe");
    if (f.none()) return std::nullopt;
  }
  if (detail::hs_cost(q, t.size(), hs.k) > opt.budget)
    throw BudgetExceeded("hitting set DP needs about " + std::to_string(detail::hs_cost(q, t.size(), hs.k)) + " steps");
  const std::size_t M = std::size_t{1} << q;
  const std::size_t full = M - 1;
  const std::size_t K = static_cast<std::size_t>(std::min<std::uint64_t>(hs.k, n));
  std::vector<std::size_t> hit(n, 0);
  for (std::size_t i = 0; i < q; ++i) for_each_member(hs.family[i], [&](TaxonId x) { hit[x] |= std::size_t{1} << i; });

  const std::size_t V = t.size();
  std::vector<detail::HsTable> f(V);  // leaves only
  // steps[v][i] = table after the first i children of v
  std::vector<std::vector<detail::HsTable>> steps(V);
  auto empty = [&](std::size_t sizes) { return detail::HsTable(sizes, std::vector<std::int64_t>(M, detail::kMinusInf)); };
  std::vector<std::size_t> cap(V, 0);

  auto table_of = [&](VertexId c) -> const detail::HsTable& { return t.is_leaf(c) ? f[c] : steps[c].back(); };
  const auto& pre = t.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    const VertexId v = *it;
    if (t.is_leaf(v)) {
      cap[v] = t.taxon(v) == kNoTaxon ? 0 : std::min<std::size_t>(1, K);
      f[v] = empty(cap[v] + 1);
      f[v][0][0] = 0;
      if (cap[v] == 1)
        for (std::size_t m = 0; m < M; ++m)
          if ((m & hit[t.taxon(v)]) == m) f[v][1][m] = 0;
      continue;
    }
    auto& st = steps[v];
    st.push_back(empty(1));
    st[0][0][0] = 0;
    std::size_t c_acc = 0;
    for (VertexId c : t.children(v)) {
      const auto& prev = st.back();
      const std::size_t c_new = std::min(K, c_acc + cap[c]);
      auto cur = empty(c_new + 1);
      const std::int64_t wc = static_cast<std::int64_t>(t.weight(c));
      const auto& fc = table_of(c);
      for (std::size_t l1 = 0; l1 <= c_acc; ++l1)
        for (std::size_t l2 = 0; l2 <= cap[c] && l1 + l2 <= c_new; ++l2)
          for (std::size_t m = 0; m < M; ++m)
            for (std::size_t a = m;; a = (a - 1) & m) {
              const std::int64_t x = prev[l1][a], y = fc[l2][m & ~a];
              if (x != detail::kMinusInf && y != detail::kMinusInf)
                cur[l1 + l2][m] = std::max(cur[l1 + l2][m], x + y + (l2 > 0 ? wc : 0));
              if (a == 0) break;
            }
      st.push_back(std::move(cur));
      c_acc = c_new;
    }
    cap[v] = c_acc;
  }

  const VertexId root = t.root();
  const auto& top = table_of(root);
  std::int64_t best = detail::kMinusInf;
  std::size_t best_l = 0;
  for (std::size_t l = 0; l <= cap[root]; ++l)
    if (top[l][full] > best) {
      best = top[l][full];
      best_l = l;
    }
  if (best == detail::kMinusInf) return std::nullopt;

  TaxonSet S(n);
  struct Job {
    VertexId v;
    std::size_t l, m;
    std::int64_t value;
  };
  std::vector<Job> todo{{root, best_l, full, best}};
  while (!todo.empty()) {
    Job j = todo.back();
    todo.pop_back();
    if (t.is_leaf(j.v)) {
      if (j.l == 1) S.set(t.taxon(j.v));
      continue;
    }
    const auto& ch = t.children(j.v);
    for (std::size_t i = ch.size(); i-- > 0;) {
      const auto& prev = steps[j.v][i];
      const auto& fc = table_of(ch[i]);
      const std::int64_t wc = static_cast<std::int64_t>(t.weight(ch[i]));
      bool found = false;
      for (std::size_t l2 = 0; l2 < fc.size() && l2 <= j.l && !found; ++l2) {
        if (j.l - l2 >= prev.size()) continue;
        for (std::size_t a = j.m;; a = (a - 1) & j.m) {
          const std::int64_t x = prev[j.l - l2][a], y = fc[l2][j.m & ~a];
          if (x != detail::kMinusInf && y != detail::kMinusInf && x + y + (l2 > 0 ? wc : 0) == j.value) {
            if (l2 > 0) todo.push_back({ch[i], l2, j.m & ~a, y});
            j.l -= l2;
            j.m = a;
            j.value = x;
            found = true;
            break;
          }
          if (a == 0) break;
        }
      }
      if (!found) throw std::logic_error("hitting set witness recovery failed");
    }
  }
  return Selection{S, static_cast<Weight>(best)};
}

// Decision form: a hitting set of diversity at least D, if any.
inline std::optional<TaxonSet> solve_hitting_set_tree_profits(const HittingSetInstance& hs,
                                                              const SolveOptions& opt = {}) {
  auto best = max_pd_hitting_set(hs, opt);
  if (!best || best->value < hs.D) return std::nullopt;
  return best->S;
}

// Tree over `universe` in which PD(S) equals PD(S ∪ anchors) - PD(anchors):
// the span of the root and the anchors is contracted into the root.
inline PhyloTree contract_anchors(const PhyloTree& tree, const TaxonSet& anchors, const std::vector<TaxonId>& universe) {
  const std::size_t V = tree.size();
  std::vector<char> span(V, 0);
  span[tree.root()] = 1;
  for_each_member(anchors, [&](TaxonId a) {
    for (VertexId v = tree.leaf(a); v != kNoVertex && !span[v]; v = tree.parent(v)) span[v] = 1;
  });
  TreeEditor ed(tree);
  for (std::size_t v = 0; v < V; ++v) {
    if (!span[v] || static_cast<VertexId>(v) == tree.root()) continue;
    for (VertexId c : tree.children(static_cast<VertexId>(v)))
      if (!span[c]) ed.rehang(c, tree.root(), tree.weight(c));
    ed.kill(static_cast<VertexId>(v));
  }
  std::vector<TaxonId> map(tree.num_taxa(), kNoTaxon);
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (anchors.test(universe[i])) throw PreconditionError("an anchor lies in the universe");
    map[universe[i]] = static_cast<TaxonId>(i);
  }
  return ed.build(universe.size(), map).tree;
}

}  // namespace pdd
