#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pdd/colorcoding/families.hpp"
#include "pdd/core.hpp"
#include "pdd/preprocess.hpp"

namespace pdd {

// Bit c-1 stands for color c.
using ColorMask = std::uint64_t;

inline ColorMask color_bit(int c) { return ColorMask{1} << (c - 1); }

struct SolveStats {
  std::uint64_t colorings = 0;
  std::uint64_t dp_runs = 0;
  std::uint64_t patterns = 0;
};

inline void check_star(const PhyloTree& t) {
  if (!t.is_star()) throw PreconditionError("the phylogenetic tree is not a star");
}

inline void check_single_source(const FoodWeb& w) {
  if (w.sources().count() != 1) throw PreconditionError("the food web must have exactly one source");
}

// DP[x, C]: best PD of a colorful set S inside X>=x with c(S) = C whose only
// source in F[S] is x. Predators are folded in one at a time (DP').
class KColoredDP {
 public:
  struct Entry {
    ColorMask mask;
    Weight value;
    ColorMask prev;  // mask of the DP'[x, p-1] part
    ColorMask pred;  // mask contributed by the p-th predator, 0 if none
  };

  KColoredDP(const PhyloTree& tree, const FoodWeb& web, const std::vector<int>& color, int num_colors)
      : web_(web), color_(color), tables_(web.size()) {
    check_star(tree);
    if (color.size() != web.size()) throw PreconditionError("coloring must cover every taxon");
    if (num_colors < 1 || num_colors > 64) throw PreconditionError("between 1 and 64 colors are supported");
    for (int c : color)
      if (c < 1 || c > num_colors) throw PreconditionError("color out of range");
    const auto& topo = web.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      TaxonId x = *it;
      auto& steps = tables_[x];
      const auto& preds = web.predators(x);
      steps.resize(preds.size() + 1);
      steps[0] = {{color_bit(color[x]), tree.weight(tree.leaf(x)), 0, 0}};
      for (std::size_t p = 1; p <= preds.size(); ++p) {
        const auto& prev = steps[p - 1];
        const auto& other = tables_[preds[p - 1]].back();
        std::unordered_map<ColorMask, Entry> next;
        next.reserve(prev.size() * 2);
        for (const Entry& a : prev) next.emplace(a.mask, Entry{a.mask, a.value, a.mask, 0});
        for (const Entry& a : prev)
          for (const Entry& b : other) {
            if (a.mask & b.mask) continue;
            ColorMask m = a.mask | b.mask;
            Weight v = a.value + b.value;
            auto [pos, fresh] = next.try_emplace(m, Entry{m, v, a.mask, b.mask});
            if (!fresh && v > pos->second.value) pos->second = Entry{m, v, a.mask, b.mask};
          }
        auto& out = steps[p];
        out.reserve(next.size());
        for (auto& [m, e] : next) out.push_back(e);
        std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.mask < b.mask; });
      }
    }
  }

  // Final DP[x, .] entries with nonempty color sets, sorted by mask.
  const std::vector<Entry>& entries(TaxonId x) const { return tables_[x].back(); }

  // nullopt marks an unreachable state; the empty color set has value 0.
  std::optional<Weight> value(TaxonId x, ColorMask C) const {
    if (C == 0) return Weight{0};
    const Entry* e = find(tables_[x].back(), C);
    if (!e) return std::nullopt;
    return e->value;
  }

  TaxonSet witness(TaxonId x, ColorMask C) const {
    TaxonSet S(web_.size());
    if (C == 0) return S;
    std::vector<std::pair<TaxonId, ColorMask>> todo{{x, C}};
    while (!todo.empty()) {
      auto [v, mask] = todo.back();
      todo.pop_back();
      const auto& steps = tables_[v];
      for (std::size_t p = steps.size() - 1;; --p) {
        const Entry* e = find(steps[p], mask);
        if (!e) throw std::logic_error("broken back-pointer in the colored table");
        if (p == 0) break;
        if (e->pred) todo.push_back({web_.predators(v)[p - 1], e->pred});
        mask = e->prev;
      }
      S.set(v);
    }
    return S;
  }

 private:
  static const Entry* find(const std::vector<Entry>& v, ColorMask m) {
    auto it = std::lower_bound(v.begin(), v.end(), m, [](const Entry& e, ColorMask k) { return e.mask < k; });
    return it != v.end() && it->mask == m ? &*it : nullptr;
  }

  const FoodWeb& web_;
  std::vector<int> color_;
  std::vector<std::vector<std::vector<Entry>>> tables_;
};

struct ColoredBest {
  Weight value = 0;
  TaxonSet taxa;
  ColorMask colors = 0;
};

// Best nonempty colorful viable set; the web must have the single source.
inline std::optional<ColoredBest> solve_k_colored_spdd(const Instance& inst, const std::vector<int>& color,
                                                       int num_colors) {
  check_star(inst.tree);
  check_single_source(inst.web);
  KColoredDP dp(inst.tree, inst.web, color, num_colors);
  TaxonId src = static_cast<TaxonId>(inst.web.sources().find_first());
  const auto& e = dp.entries(src);
  if (e.empty()) return std::nullopt;
  auto best = std::max_element(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return ColoredBest{best->value, dp.witness(src, best->mask), best->mask};
}

namespace detail {

inline std::uint64_t pow3(std::size_t k) {
  double v = std::pow(3.0, static_cast<double>(k));
  return v > 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(v);
}

inline std::uint64_t sat_pow2(std::size_t e) { return e >= 64 ? UINT64_MAX : std::uint64_t{1} << e; }

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? UINT64_MAX : r;
}

// Runs the colored DP over every function of a hash family on the single
// source transform and keeps the best set.
inline std::optional<ColoredBest> best_over_family(const Instance& inst, Weight star_D, const SolveOptions& opt,
                                                   SolveStats* stats, Weight stop_at) {
  Instance base = inst;
  base.D = star_D;
  SourceTransform t = single_source_transform(base);
  const std::size_t n = inst.n();
  const std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(inst.k, n));
  const int K = static_cast<int>(k) + 1;
  std::uint64_t per_run = sat_mul(pow3(K), n + inst.web.num_arcs() + 1);
  if (per_run > opt.budget) throw BudgetExceeded("colored DP over " + std::to_string(K) + " colors exceeds the budget");
  HashFamily h = build_perfect_hash_family(n, k, opt.mode, opt.seed, opt.epsilon, opt.budget / per_run + 1);
  if (sat_mul(per_run, h.functions.size()) > opt.budget)
    throw BudgetExceeded("color coding over " + std::to_string(h.functions.size()) + " colorings exceeds the budget");
  std::optional<ColoredBest> best;
  std::vector<int> color(n + 1);
  color[t.star] = K;
  for (const auto& f : h.functions) {
    for (std::size_t j = 0; j < n; ++j) color[j] = f[j];
    auto r = solve_k_colored_spdd(t.instance, color, K);
    if (stats) {
      ++stats->colorings;
      ++stats->dp_runs;
    }
    if (!r) continue;
    TaxonSet S = strip_star(r->taxa, t);
    Weight v = pd(inst.tree, S);
    if (!best || v > best->value) {
      best = ColoredBest{v, std::move(S), r->colors};
      if (v >= stop_at) break;
    }
  }
  return best;
}

}  // namespace detail

// Color coding over an (n, k)-perfect hash family; the added source gets
// the extra color k+1.
inline Answer solve_spdd_by_k(const Instance& inst, const SolveOptions& opt = {}, SolveStats* stats = nullptr) {
  check_star(inst.tree);
  if (inst.D == 0) return make_solution(inst, TaxonSet(inst.n()));
  if (inst.k == 0 || inst.n() == 0) return std::nullopt;
  auto best = detail::best_over_family(inst, inst.D, opt, stats, inst.D);
  if (!best || best->value < inst.D) return std::nullopt;
  if (!is_solution(inst, best->taxa)) throw std::logic_error("color coding produced an invalid witness");
  return make_solution(inst, best->taxa);
}

// Maximum PD of a viable set of at most k taxa (exact mode gives the optimum).
inline Solution optimize_spdd_by_k(const Instance& inst, const SolveOptions& opt = {}, SolveStats* stats = nullptr) {
  check_star(inst.tree);
  if (inst.k == 0 || inst.n() == 0) return make_solution(inst, TaxonSet(inst.n()));
  auto best = detail::best_over_family(inst, 0, opt, stats, inst.tree.total_weight());
  if (!best) return make_solution(inst, TaxonSet(inst.n()));
  return make_solution(inst, best->taxa);
}

}  // namespace pdd
