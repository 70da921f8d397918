#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding.hpp"
#include "pdd/core.hpp"
#include "pdd/pattern/pattern_tree.hpp"
#include "pdd/pattern/reductions.hpp"
#include "pdd/preprocess.hpp"

namespace pdd {

inline constexpr std::uint64_t kPatternEnumerationBudget = 20'000'000;

// Decides PDD-pattern. A yes carries a verified PDD witness.
inline Answer solve_pdd_pattern(const Instance& inst, const PatternTree& pattern, const std::vector<int>& color,
                                SolveStats* stats = nullptr) {
  const PhyloTree& t = inst.tree;
  if (color.size() != t.size()) throw PreconditionError("coloring must cover every tree vertex");
  std::set<int> present(color.begin(), color.end());
  for (int c : pattern.colors())
    if (!present.count(c)) return std::nullopt;
  if (color[t.root()] != pattern.color(pattern.root())) return std::nullopt;
  auto norm = pattern.normalized();
  if (!norm) return std::nullopt;
  if (norm->size() == 1) {
    if (inst.D == 0) return make_solution(inst, TaxonSet(inst.n()));
    return std::nullopt;
  }

  PatternInstance p = make_pattern_instance(inst, color, *norm);
  rr_contract_internal(p);
  if (p.empty()) return std::nullopt;
  if (!p.is_star()) throw std::logic_error("pattern contraction did not reach a star");

  const PatternTree& P = p.pattern;
  std::vector<int> leaf_colors;
  for (int c : P.children(P.root())) leaf_colors.push_back(P.color(c));
  std::sort(leaf_colors.begin(), leaf_colors.end());
  if (leaf_colors.size() > inst.k || leaf_colors.size() > 63) return std::nullopt;

  // The star over the live taxa, renumbered in increasing order.
  std::vector<TaxonId> origin = members(p.live);
  const std::size_t m = origin.size();
  std::vector<VertexId> par(m + 1, 0);
  std::vector<Weight> w(m + 1, 0);
  std::vector<TaxonId> tx(m + 1, kNoTaxon);
  par[0] = kNoVertex;
  Instance star;
  std::vector<int> cc(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    VertexId leaf = t.leaf(origin[i]);
    w[i + 1] = p.weight[leaf];
    tx[i + 1] = static_cast<TaxonId>(i);
    star.names.push_back(inst.names[origin[i]]);
    auto it = std::lower_bound(leaf_colors.begin(), leaf_colors.end(), p.color[leaf]);
    if (it == leaf_colors.end() || *it != p.color[leaf]) throw std::logic_error("star leaf outside the pattern");
    cc[i] = static_cast<int>(it - leaf_colors.begin()) + 1;
  }
  star.tree = PhyloTree(std::move(par), std::move(w), std::move(tx), m, PhyloTree::Arity::relaxed);
  star.web = inst.web.induced(p.live);
  star.k = inst.k;
  star.D = 0;
  SourceTransform st = single_source_transform(star);
  const int K = static_cast<int>(leaf_colors.size()) + 1;
  cc[st.star] = K;

  KColoredDP dp(st.instance.tree, st.instance.web, cc, K);
  if (stats) ++stats->dp_runs;
  const ColorMask full = (ColorMask{1} << K) - 1;
  auto value = dp.value(st.star, full);
  const Weight star_weight = st.instance.tree.weight(st.instance.tree.leaf(st.star));
  if (!value || *value - star_weight < inst.D) return std::nullopt;
  TaxonSet S = lift(strip_star(dp.witness(st.star, full), st), origin, inst.n());
  if (!is_solution(inst, S)) throw std::logic_error("pattern solver produced an invalid witness");
  return make_solution(inst, S);
}

namespace detail {

inline std::uint64_t sat_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = sat_mul(r, b);
  return r;
}

}  // namespace detail

// Calls f(parent) for every labeled rooted tree on i vertices: each Pruefer
// sequence is decoded and the unrooted tree is rooted at every vertex.
inline void for_each_labeled_rooted_tree(std::size_t i, const std::function<void(const std::vector<int>&)>& f,
                                         std::uint64_t budget = kPatternEnumerationBudget) {
  if (i < 1) throw PreconditionError("labeled trees need at least one vertex");
  std::uint64_t count = detail::sat_pow(i, i - 1);
  if (count > budget)
    throw BudgetExceeded("enumerating " + std::to_string(count) + " labeled rooted trees on i = " +
                         std::to_string(i) + " vertices exceeds the budget");
  if (i == 1) {
    f({-1});
    return;
  }
  const std::size_t L = i - 2;
  std::vector<std::size_t> seq(L, 0);
  std::vector<std::vector<int>> adj(i);
  std::vector<int> degree(i), par(i), stack;
  for (;;) {
    for (auto& a : adj) a.clear();
    std::fill(degree.begin(), degree.end(), 1);
    for (std::size_t s : seq) ++degree[s];
    for (std::size_t s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      adj[leaf].push_back(static_cast<int>(s));
      adj[s].push_back(static_cast<int>(leaf));
      --degree[leaf];
      --degree[s];
    }
    int u = -1, v = -1;
    for (std::size_t x = 0; x < i; ++x)
      if (degree[x] == 1) (u == -1 ? u : v) = static_cast<int>(x);
    adj[u].push_back(v);
    adj[v].push_back(u);
    for (std::size_t r = 0; r < i; ++r) {
      std::fill(par.begin(), par.end(), -2);
      par[r] = -1;
      stack.assign(1, static_cast<int>(r));
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
          if (par[y] == -2) {
            par[y] = x;
            stack.push_back(y);
          }
      }
      f(par);
    }
    std::size_t pos = 0;
    while (pos < L && ++seq[pos] == i) seq[pos++] = 0;
    if (pos == L) break;
  }
}

// Every labeled rooted tree on i vertices; vertex j carries color j + 1.
inline std::vector<PatternTree> enumerate_labeled_rooted_trees(std::size_t i,
                                                               std::uint64_t budget = kPatternEnumerationBudget) {
  std::vector<PatternTree> out;
  std::vector<int> col(i);
  for (std::size_t j = 0; j < i; ++j) col[j] = static_cast<int>(j) + 1;
  for_each_labeled_rooted_tree(i, [&](const std::vector<int>& par) { out.emplace_back(par, col); }, budget);
  return out;
}

// PDD via colored patterns of every size up to 1 + k * height.
inline Answer solve_pdd_by_k_height(const Instance& inst, const SolveOptions& opt = {}, SolveStats* stats = nullptr) {
  if (inst.D == 0) return make_solution(inst, TaxonSet(inst.n()));
  if (inst.k == 0 || inst.n() == 0) return std::nullopt;
  const PhyloTree& t = inst.tree;
  const std::size_t V = t.size();
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, inst.n());
  const std::uint64_t top = std::min<std::uint64_t>(V, detail::sat_mul(k, t.height()) + 1);
  const VertexId rho = t.root();
  for (std::size_t i = 1; i <= top; ++i) {
    const std::uint64_t per_root = i < 2 ? 1 : detail::sat_pow(i, i - 2);
    if (detail::sat_mul(per_root, i) > kPatternEnumerationBudget)
      throw BudgetExceeded("pattern enumeration refused at i = " + std::to_string(i));
    HashFamily h = build_perfect_hash_family(V, i, opt.mode, opt.seed + i, opt.epsilon, opt.budget / per_root + 1);
    if (detail::sat_mul(detail::sat_mul(h.functions.size(), per_root), V) > opt.budget)
      throw BudgetExceeded("pattern search refused at i = " + std::to_string(i));
    // Patterns grouped by root label, parent arrays stored flat.
    std::vector<std::vector<std::int8_t>> by_root(i);
    for_each_labeled_rooted_tree(i, [&](const std::vector<int>& par) {
      auto r = std::find(par.begin(), par.end(), -1) - par.begin();
      for (int x : par) by_root[r].push_back(static_cast<std::int8_t>(x));
    });
    std::vector<int> palette(i);
    for (std::size_t j = 0; j < i; ++j) palette[j] = static_cast<int>(j) + 1;
    std::vector<int> color(V);
    std::vector<std::uint64_t> pairs(i + 1);
    std::vector<int> par(i);
    for (const auto& f : h.functions) {
      if (stats) ++stats->colorings;
      for (std::size_t v = 0; v < V; ++v) color[v] = f[v];
      std::fill(pairs.begin(), pairs.end(), 0);
      for (std::size_t v = 0; v < V; ++v)
        if (t.parent(static_cast<VertexId>(v)) != kNoVertex)
          pairs[color[t.parent(static_cast<VertexId>(v))]] |= std::uint64_t{1} << color[v];
      const auto& group = by_root[color[rho] - 1];
      for (std::size_t off = 0; off < group.size(); off += i) {
        bool fits = true;
        for (std::size_t j = 0; j < i && fits; ++j) {
          int pj = group[off + j];
          if (pj >= 0 && !(pairs[pj + 1] >> (j + 1) & 1)) fits = false;
        }
        if (!fits) continue;
        for (std::size_t j = 0; j < i; ++j) par[j] = group[off + j];
        if (stats) ++stats->patterns;
        Answer a = solve_pdd_pattern(inst, PatternTree(par, palette), color, stats);
        if (a) return a;
      }
    }
  }
  return std::nullopt;
}

}  // namespace pdd
