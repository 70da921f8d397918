#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding.hpp"
#include "pdd/core.hpp"
#include "pdd/diversity/edge_colors.hpp"
#include "pdd/preprocess.hpp"

namespace pdd {

// Reachable (hat colors, covered colors) pairs of viable sets S that contain
// x and lie above x, with x the only source of F[S]. Per hat-color set only
// the inclusion-maximal coverage masks are kept.
class DColoredDP {
 public:
  struct Entry {
    ColorMask hat, cover;
    ColorMask prev_hat, prev_cover;
    ColorMask pred_hat, pred_cover;  // pred_hat == 0: predator not used
  };

  DColoredDP(const FoodWeb& web, const std::vector<ColorMask>& cover, const std::vector<int>& hat, int num_hat)
      : web_(web), tables_(web.size()) {
    if (cover.size() != web.size() || hat.size() != web.size())
      throw PreconditionError("colorings must cover every taxon");
    if (num_hat < 1 || num_hat > 64) throw PreconditionError("between 1 and 64 taxon colors are supported");
    for (int c : hat)
      if (c < 1 || c > num_hat) throw PreconditionError("taxon color out of range");
    const auto& topo = web.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      TaxonId x = *it;
      auto& steps = tables_[x];
      const auto& preds = web.predators(x);
      steps.resize(preds.size() + 1);
      steps[0] = {{color_bit(hat[x]), cover[x], 0, 0, 0, 0}};
      for (std::size_t p = 1; p <= preds.size(); ++p) {
        std::map<ColorMask, std::vector<Entry>> next;
        for (const Entry& a : steps[p - 1]) insert(next, Entry{a.hat, a.cover, a.hat, a.cover, 0, 0});
        for (const Entry& a : steps[p - 1])
          for (const Entry& b : tables_[preds[p - 1]].back()) {
            if (a.hat & b.hat) continue;
            insert(next, Entry{a.hat | b.hat, a.cover | b.cover, a.hat, a.cover, b.hat, b.cover});
          }
        auto& out = steps[p];
        for (auto& [h, v] : next) out.insert(out.end(), v.begin(), v.end());
      }
    }
  }

  const std::vector<Entry>& entries(TaxonId x) const { return tables_[x].back(); }

  // An entry at x whose coverage includes `need`, if any.
  std::optional<Entry> find_cover(TaxonId x, ColorMask need) const {
    for (const Entry& e : entries(x))
      if ((e.cover & need) == need) return e;
    return std::nullopt;
  }

  TaxonSet witness(TaxonId x, const Entry& top) const {
    TaxonSet S(web_.size());
    std::vector<std::pair<TaxonId, std::pair<ColorMask, ColorMask>>> todo{{x, {top.hat, top.cover}}};
    while (!todo.empty()) {
      auto [v, key] = todo.back();
      todo.pop_back();
      auto [h, c] = key;
      const auto& steps = tables_[v];
      for (std::size_t p = steps.size() - 1;; --p) {
        const Entry* e = find(steps[p], h, c);
        if (!e) throw std::logic_error("broken back-pointer in the diversity table");
        if (p == 0) break;
        if (e->pred_hat) todo.push_back({web_.predators(v)[p - 1], {e->pred_hat, e->pred_cover}});
        h = e->prev_hat;
        c = e->prev_cover;
      }
      S.set(v);
    }
    return S;
  }

 private:
  static void insert(std::map<ColorMask, std::vector<Entry>>& m, const Entry& e) {
    auto& v = m[e.hat];
    for (const Entry& o : v)
      if ((o.cover & e.cover) == e.cover) return;
    v.erase(std::remove_if(v.begin(), v.end(), [&](const Entry& o) { return (o.cover & e.cover) == o.cover; }),
            v.end());
    v.push_back(e);
  }

  static const Entry* find(const std::vector<Entry>& v, ColorMask h, ColorMask c) {
    for (const Entry& e : v)
      if (e.hat == h && e.cover == c) return &e;
    return nullptr;
  }

  const FoodWeb& web_;
  std::vector<std::vector<std::vector<Entry>>> tables_;
};

inline ColorMask full_mask(std::size_t D) { return D >= 64 ? ~ColorMask{0} : (ColorMask{1} << D) - 1; }

// D-colored PDD on a single-source instance: a viable S whose edge colors
// cover [D] and on which the taxon coloring is injective.
inline Answer solve_d_colored_pdd(const Instance& inst, const EdgeColorAssignment& asg) {
  check_single_source(inst.web);
  if (inst.D == 0) return make_solution(inst, TaxonSet(inst.n()));
  if (inst.tree.max_weight() >= inst.D) throw PreconditionError("the heavy-edge rule must be applied first");
  if (asg.D != inst.D) throw PreconditionError("assignment built for a different D");
  if (asg.taxon_colors.size() != inst.n()) throw PreconditionError("assignment built for a different tree");
  DColoredDP dp(inst.web, asg.taxon_colors, asg.hat, static_cast<int>(asg.k));
  TaxonId src = static_cast<TaxonId>(inst.web.sources().find_first());
  auto e = dp.find_cover(src, full_mask(asg.D));
  if (!e) return std::nullopt;
  TaxonSet S = dp.witness(src, *e);
  return make_solution(inst, S);
}

// Color coding over a (W, D) family for the edges and an (n, k) family for
// the taxa, on the single-source transform. The added source carries no
// edge colors and the extra taxon color k+1.
inline Answer solve_pdd_by_d(const Instance& inst, const SolveOptions& opt = {}, SolveStats* stats = nullptr) {
  if (inst.D == 0) return make_solution(inst, TaxonSet(inst.n()));
  if (inst.k == 0 || inst.n() == 0 || inst.D > inst.tree.total_weight()) return std::nullopt;
  Restricted r = rr_reachability_prune(inst);
  if (Answer a = rr_heavy_edge_accept(r.instance)) {
    TaxonSet S = lift(a->taxa, r.origin, inst.n());
    if (!is_solution(inst, S)) throw std::logic_error("heavy-edge rule produced an invalid witness");
    return make_solution(inst, S);
  }
  const Instance& red = r.instance;
  const std::size_t n = red.n();
  if (n == 0 || red.tree.total_weight() < inst.D) return std::nullopt;
  const std::size_t D = static_cast<std::size_t>(inst.D);
  if (D > 64) throw BudgetExceeded("D = " + std::to_string(D) + " exceeds 64 diversity colors");
  const std::size_t W = static_cast<std::size_t>(red.tree.total_weight());
  const std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(inst.k, n));
  // table entries are bounded both by the color states and by the number of
  // sets of at most k+1 taxa
  std::uint64_t sets = 0;
  for (std::size_t j = 0; j <= k + 1; ++j) sets = std::min(sets + std::min(binomial(n + 1, j), UINT64_MAX / 2), UINT64_MAX / 2);
  const std::uint64_t states = std::min(detail::sat_mul(detail::pow3(k + 1), detail::sat_pow2(D)), sets);
  const std::uint64_t per_run = detail::sat_mul(states, n + red.web.num_arcs() + 1);
  if (per_run > opt.budget) throw BudgetExceeded("diversity DP over D + k = " + std::to_string(D + k) + " colors");
  const double eps = opt.epsilon / 2;
  HashFamily hd = build_perfect_hash_family(W, D, opt.mode, opt.seed, eps, opt.budget / per_run + 1);
  HashFamily hk = build_perfect_hash_family(n, k, opt.mode, opt.seed ^ 0x9e3779b97f4a7c15ULL, eps,
                                            opt.budget / per_run + 1);
  const std::uint64_t cells = detail::sat_mul(hd.functions.size(), hk.functions.size());
  if (detail::sat_mul(cells, per_run) > opt.budget)
    throw BudgetExceeded("diversity color coding over " + std::to_string(cells) + " colorings");

  SourceTransform st = single_source_transform(red);
  const TaxonId star = st.star;
  std::vector<ColorMask> cover(n + 1, 0);
  std::vector<int> hat(n + 1, static_cast<int>(k) + 1);
  const ColorMask need = full_mask(D);
  for (const auto& f : hd.functions) {
    EdgeColorAssignment asg = build_edge_color_assignment(red.tree, D, k, f, hk.functions.front());
    for (std::size_t x = 0; x < n; ++x) cover[x] = asg.taxon_colors[x];
    for (const auto& g : hk.functions) {
      for (std::size_t x = 0; x < n; ++x) hat[x] = g[x];
      if (stats) {
        ++stats->colorings;
        ++stats->dp_runs;
      }
      DColoredDP dp(st.instance.web, cover, hat, static_cast<int>(k) + 1);
      auto e = dp.find_cover(star, need);
      if (!e) continue;
      TaxonSet S = lift(strip_star(dp.witness(star, *e), st), r.origin, inst.n());
      if (!is_solution(inst, S)) throw std::logic_error("diversity color coding produced an invalid witness");
      return make_solution(inst, S);
    }
  }
  return std::nullopt;
}

}  // namespace pdd
