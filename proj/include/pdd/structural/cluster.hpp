#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding/families.hpp"
#include "pdd/colorcoding/k_colored.hpp"
#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/modulator.hpp"

namespace pdd {

namespace detail {

// Tables over (size, Z-mask) holding the best diversity; "at least" masks.
using MaskTable = std::vector<std::vector<std::int64_t>>;

inline MaskTable mask_table(std::size_t sizes, std::size_t masks) {
  return MaskTable(sizes, std::vector<std::int64_t>(masks, kMinusInf));
}

// Within one clique (topological order): subsets whose first member is a
// source or eats a member of Z; entry [l][M] = best over |S| = l feeding at
// least M.
struct CliqueTable {
  MaskTable best;
  std::vector<TaxonId> order;
  std::vector<MaskTable> layers;  // exact masks after each member of order
};

// Some subset of the clique of size l feeding at least `need` worth exactly
// `value`, added to S.
template <class Start>
void pick_from_clique(const CliqueTable& ct, const std::vector<std::size_t>& feeds, const std::vector<Weight>& w,
                      const Start& can_start, std::size_t l, std::size_t need, std::int64_t value, TaxonSet& S) {
  const MaskTable& last = ct.layers.back();
  std::size_t m = 0;
  bool ok = false;
  for (std::size_t e = 0; e < last[l].size() && !ok; ++e)
    if ((e & need) == need && last[l][e] == value) {
      m = e;
      ok = true;
    }
  if (!ok) throw std::logic_error("cluster witness recovery failed");
  std::int64_t v = value;
  for (std::size_t i = ct.order.size(); i-- > 0 && l > 0;) {
    const MaskTable& prev = ct.layers[i];
    if (prev[l][m] == v) continue;
    const TaxonId x = ct.order[i];
    const std::int64_t wx = static_cast<std::int64_t>(w[x]);
    if (l == 1 && m == feeds[x] && v == wx && can_start(x)) {
      S.set(x);
      return;
    }
    bool step = false;
    for (std::size_t m0 = 0; m0 < prev[l - 1].size() && !step; ++m0)
      if ((m0 | feeds[x]) == m && prev[l - 1][m0] != kMinusInf && prev[l - 1][m0] + wx == v) {
        S.set(x);
        m = m0;
        v -= wx;
        --l;
        step = true;
      }
    if (!step) throw std::logic_error("cluster witness recovery failed");
  }
  if (l != 0) throw std::logic_error("cluster witness recovery failed");
}

}  // namespace detail

// Best s-PDD value of S ∪ Z with S ∩ Y = Z, all of Z saved; nullopt when no
// such viable set exists within k.
inline std::optional<Selection> solve_spdd_cluster_fixed_Z(const Instance& inst, const Modulator& mod,
                                                           const TaxonSet& Z) {
  detail::require_star(inst, "the cluster solver");
  if (mod.target != GraphClass::cluster) throw PreconditionError("a cluster modulator is required");
  const FoodWeb& web = inst.web;
  const std::size_t n = inst.n();
  const TaxonSet& Y = mod.Y;
  if (Y.size() != n || Z.size() != n) throw DomainError("modulator does not match the instance");
  if (!Z.is_subset_of(Y)) throw PreconditionError("Z must be a subset of Y");
  const std::size_t zc = Z.count();
  if (zc > inst.k) return std::nullopt;
  const std::size_t budget = static_cast<std::size_t>(std::min<std::uint64_t>(inst.k - zc, n));

  TaxonSet alive = detail::reachable_avoiding(web, Y - Z);
  if (!Z.is_subset_of(alive)) return std::nullopt;
  const auto w = detail::star_weights(inst.tree);

  // Z members fed inside Z (or sources) need nothing; the rest get a bit
  std::vector<TaxonId> needy;
  for_each_member(Z, [&](TaxonId z) {
    bool ok = web.is_source(z);
    for (TaxonId p : web.prey(z)) ok = ok || Z.test(p);
    if (!ok) needy.push_back(z);
  });
  const std::size_t q = needy.size();
  const std::size_t M = std::size_t{1} << q;
  const std::size_t full = M - 1;
  std::vector<std::size_t> feeds(n, 0);
  for (std::size_t i = 0; i < q; ++i)
    for (TaxonId p : web.prey(needy[i])) feeds[p] |= std::size_t{1} << i;

  auto can_start = [&](TaxonId x) {
    if (web.is_source(x)) return true;
    for (TaxonId p : web.prey(x))
      if (Z.test(p)) return true;
    return false;
  };

  std::vector<int> rank(n);
  const auto& topo = web.topological_order();
  for (std::size_t i = 0; i < n; ++i) rank[topo[i]] = static_cast<int>(i);

  // per clique: exact-mask forward pass, then closed downward
  std::vector<detail::CliqueTable> cliques;
  for (const auto& part : mod.parts) {
    detail::CliqueTable ct;
    for (TaxonId x : part)
      if (alive.test(x)) ct.order.push_back(x);
    if (ct.order.empty()) continue;
    std::sort(ct.order.begin(), ct.order.end(), [&](TaxonId a, TaxonId b) { return rank[a] < rank[b]; });
    const std::size_t L = std::min(budget, ct.order.size());
    // started[l][mask]: nonempty prefixes chosen so far
    auto started = detail::mask_table(L + 1, M);
    ct.layers.push_back(started);
    for (TaxonId x : ct.order) {
      auto next = started;
      for (std::size_t l = 0; l < L; ++l)
        for (std::size_t m = 0; m < M; ++m)
          if (started[l][m] != detail::kMinusInf)
            next[l + 1][m | feeds[x]] = std::max(next[l + 1][m | feeds[x]], started[l][m] + static_cast<std::int64_t>(w[x]));
      if (L >= 1 && can_start(x))
        next[1][feeds[x]] = std::max(next[1][feeds[x]], static_cast<std::int64_t>(w[x]));
      started.swap(next);
      ct.layers.push_back(started);
    }
    ct.best = detail::mask_table(L + 1, M);
    ct.best[0][0] = 0;
    for (std::size_t l = 1; l <= L; ++l)
      for (std::size_t m = 0; m < M; ++m) ct.best[l][m] = started[l][m];
    for (std::size_t l = 0; l <= L; ++l)
      for (std::size_t bit = 1; bit < M; bit <<= 1)
        for (std::size_t m = 0; m < M; ++m)
          if (!(m & bit)) ct.best[l][m] = std::max(ct.best[l][m], ct.best[l][m | bit]);
    cliques.push_back(std::move(ct));
  }

  // across cliques: prefix tables for witness recovery
  std::vector<detail::MaskTable> prefix;
  prefix.push_back(detail::mask_table(budget + 1, M));
  prefix[0][0][0] = 0;
  for (const auto& ct : cliques) {
    const auto& prev = prefix.back();
    auto cur = detail::mask_table(budget + 1, M);
    for (std::size_t l1 = 0; l1 <= budget; ++l1)
      for (std::size_t l2 = 0; l2 < ct.best.size() && l1 + l2 <= budget; ++l2)
        for (std::size_t m = 0; m < M; ++m)
          for (std::size_t a = m;; a = (a - 1) & m) {
            std::int64_t x = prev[l1][a], y = ct.best[l2][m & ~a];
            if (x != detail::kMinusInf && y != detail::kMinusInf) cur[l1 + l2][m] = std::max(cur[l1 + l2][m], x + y);
            if (a == 0) break;
          }
    prefix.push_back(std::move(cur));
  }

  std::int64_t best = detail::kMinusInf;
  std::size_t best_l = 0;
  for (std::size_t l = 0; l <= budget; ++l)
    if (prefix.back()[l][full] > best) {
      best = prefix.back()[l][full];
      best_l = l;
    }
  if (best == detail::kMinusInf) return std::nullopt;

  // walk back through the cliques
  TaxonSet S = Z;
  std::size_t l = best_l, m = full;
  std::int64_t target = best;
  for (std::size_t i = cliques.size(); i-- > 0;) {
    const auto& ct = cliques[i];
    const auto& prev = prefix[i];
    bool found = false;
    for (std::size_t l2 = 0; l2 < ct.best.size() && l2 <= l && !found; ++l2)
      for (std::size_t a = m;; a = (a - 1) & m) {
        std::int64_t x = prev[l - l2][a], y = ct.best[l2][m & ~a];
        if (x != detail::kMinusInf && y != detail::kMinusInf && x + y == target) {
          if (l2 > 0) pick_from_clique(ct, feeds, w, can_start, l2, m & ~a, y, S);
          l -= l2;
          m = a;
          target = x;
          found = true;
          break;
        }
        if (a == 0) break;
      }
    if (!found) throw std::logic_error("cluster witness recovery failed");
  }
  return Selection{S, pd(inst.tree, S)};
}

// Optimum over all Z ⊆ Y.
inline std::optional<Selection> max_pd_by_cluster_modulator(const Instance& inst, const Modulator& mod,
                                                            const SolveOptions& opt = {}) {
  detail::require_star(inst, "the cluster solver");
  if (mod.target != GraphClass::cluster || !is_cluster_modulator(inst.web, mod.Y))
    throw PreconditionError("F - Y is not a cluster graph");
  const std::vector<TaxonId> ys = members(mod.Y);
  const std::size_t d = ys.size();
  if (d > 30) throw BudgetExceeded("cluster modulator of size " + std::to_string(d));
  const std::uint64_t kk = std::min<std::uint64_t>(inst.k, inst.n()) + 1;
  const std::uint64_t work = detail::sat_mul(detail::sat_mul(detail::sat_pow2(d), detail::pow3(d)),
                                             detail::sat_mul(inst.n() + 1, detail::sat_mul(kk, kk)));
  if (work > opt.budget) throw BudgetExceeded("cluster DP needs about " + std::to_string(work) + " steps");
  std::optional<Selection> best;
  for (std::uint64_t zm = 0; zm < (std::uint64_t{1} << d); ++zm) {
    TaxonSet Z(inst.n());
    for (std::size_t i = 0; i < d; ++i)
      if (zm >> i & 1) Z.set(ys[i]);
    auto r = solve_spdd_cluster_fixed_Z(inst, mod, Z);
    if (r && (!best || r->value > best->value)) best = r;
  }
  return best;
}

inline Answer solve_spdd_by_cluster_modulator(const Instance& inst, const Modulator& mod, const SolveOptions& opt = {}) {
  auto best = max_pd_by_cluster_modulator(inst, mod, opt);
  if (!best || best->value < inst.D) return std::nullopt;
  if (!is_solution(inst, best->S)) throw std::logic_error("cluster solver produced an invalid witness");
  return make_solution(inst, best->S);
}

}  // namespace pdd
