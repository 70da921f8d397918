#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/colorcoding/families.hpp"
#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/hitting_set.hpp"
#include "pdd/structural/modulator.hpp"

namespace pdd {

namespace detail {

// Best S ∪ anchors with S ⊆ universe, |S| <= budget, S hitting every set in
// `needs` (restricted to the universe).
inline std::optional<Selection> anchored_hitting_set(const Instance& inst, const TaxonSet& anchors,
                                                     const std::vector<TaxonId>& universe,
                                                     const std::vector<TaxonSet>& needs, std::uint64_t budget,
                                                     const SolveOptions& opt) {
  std::vector<TaxonId> local(inst.n(), kNoTaxon);
  for (std::size_t i = 0; i < universe.size(); ++i) local[universe[i]] = static_cast<TaxonId>(i);
  HittingSetInstance hs{contract_anchors(inst.tree, anchors, universe), {}, budget, 0};
  for (const TaxonSet& need : needs) {
    TaxonSet f(universe.size());
    for_each_member(need, [&](TaxonId x) {
      if (local[x] != kNoTaxon) f.set(local[x]);
    });
    if (f.none()) return std::nullopt;
    hs.family.push_back(std::move(f));
  }
  auto r = max_pd_hitting_set(hs, opt);
  if (!r) return std::nullopt;
  TaxonSet S = anchors;
  for_each_member(r->S, [&](TaxonId i) { S.set(universe[i]); });
  return Selection{S, pd(inst.tree, S)};
}

}  // namespace detail

// Best viable S within k with S ∩ Y = Z.
inline std::optional<Selection> solve_pdd_cocluster_fixed_Z(const Instance& inst, const Modulator& mod,
                                                            const TaxonSet& Z, const SolveOptions& opt = {}) {
  if (mod.target != GraphClass::cocluster) throw PreconditionError("a co-cluster modulator is required");
  const FoodWeb& web = inst.web;
  const std::size_t n = inst.n();
  const TaxonSet& Y = mod.Y;
  if (Y.size() != n || Z.size() != n) throw DomainError("modulator does not match the instance");
  if (!Z.is_subset_of(Y)) throw PreconditionError("Z must be a subset of Y");
  const std::uint64_t zc = Z.count();
  if (zc > inst.k) return std::nullopt;

  // R_Z: outside Y and fed by a source position or by Z
  TaxonSet RZ(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (Y.test(x)) continue;
    bool fed = web.is_source(static_cast<TaxonId>(x));
    for (TaxonId p : web.prey(static_cast<TaxonId>(x))) fed = fed || Z.test(p);
    if (fed) RZ.set(x);
  }
  std::vector<TaxonId> needy;
  for_each_member(Z, [&](TaxonId z) {
    bool ok = web.is_source(z);
    for (TaxonId p : web.prey(z)) ok = ok || Z.test(p);
    if (!ok) needy.push_back(z);
  });
  std::vector<TaxonSet> prey_sets;
  for (TaxonId z : needy) {
    TaxonSet s(n);
    for (TaxonId p : web.prey(z)) s.set(p);
    prey_sets.push_back(std::move(s));
  }

  std::optional<Selection> best;
  auto consider = [&](std::optional<Selection> r) {
    if (r && (!best || r->value > best->value)) best = std::move(r);
  };

  if (needy.empty()) consider(Selection{Z, pd(inst.tree, Z)});

  // everything outside Y inside one independent set
  const std::uint64_t left = inst.k - zc;
  std::vector<int> part_of(n, -1);
  for (std::size_t i = 0; i < mod.parts.size(); ++i)
    for (TaxonId x : mod.parts[i]) part_of[x] = static_cast<int>(i);
  for (const auto& part : mod.parts) {
    std::vector<TaxonId> U;
    for (TaxonId x : part)
      if (RZ.test(x)) U.push_back(x);
    if (U.empty() || left == 0) continue;
    consider(detail::anchored_hitting_set(inst, Z, U, prey_sets, left, opt));
  }

  // x_i first chosen taxon, x_j first chosen taxon outside its part
  if (left >= 2) {
    std::vector<int> rank(n);
    const auto& topo = web.topological_order();
    for (std::size_t i = 0; i < n; ++i) rank[topo[i]] = static_cast<int>(i);
    for_each_member(RZ, [&](TaxonId xi) {
      const int I = part_of[xi];
      for (std::size_t j = 0; j < n; ++j) {
        const TaxonId xj = static_cast<TaxonId>(j);
        if (Y.test(j) || part_of[xj] == I || rank[xj] <= rank[xi]) continue;
        std::vector<TaxonId> U;
        for (TaxonId x : topo) {
          if (Y.test(x) || x == xi || x == xj) continue;
          const int r = rank[x];
          if (r > rank[xi] && r < rank[xj] && part_of[x] == I && RZ.test(x)) U.push_back(x);
          if (r > rank[xj]) U.push_back(x);
        }
        TaxonSet anchors = Z;
        anchors.set(xi);
        anchors.set(xj);
        std::vector<TaxonSet> needs;
        bool dead = false;
        for (std::size_t t = 0; t < needy.size(); ++t) {
          if (prey_sets[t].test(xi) || prey_sets[t].test(xj)) continue;
          TaxonSet w = prey_sets[t];
          bool any = false;
          for (TaxonId x : U) any = any || w.test(x);
          if (!any) {
            dead = true;
            break;
          }
          needs.push_back(std::move(w));
        }
        if (dead) continue;
        consider(detail::anchored_hitting_set(inst, anchors, U, needs, left - 2, opt));
      }
    });
  }
  return best;
}

inline std::optional<Selection> max_pd_by_cocluster_modulator(const Instance& inst, const Modulator& mod,
                                                              const SolveOptions& opt = {}) {
  if (mod.target != GraphClass::cocluster || !is_cocluster_modulator(inst.web, mod.Y))
    throw PreconditionError("F - Y is not a co-cluster graph");
  const std::vector<TaxonId> ys = members(mod.Y);
  const std::size_t d = ys.size();
  if (d > 24) throw BudgetExceeded("co-cluster modulator of size " + std::to_string(d));
  const std::uint64_t n = inst.n();
  const std::uint64_t work = detail::sat_mul(detail::sat_mul(detail::sat_pow2(d), detail::sat_mul(n + 1, n + 1)),
                                             detail::hs_cost(d, inst.tree.size(), inst.k));
  if (work > opt.budget) throw BudgetExceeded("co-cluster search needs about " + std::to_string(work) + " steps");
  std::optional<Selection> best;
  for (std::uint64_t zm = 0; zm < (std::uint64_t{1} << d); ++zm) {
    TaxonSet Z(inst.n());
    for (std::size_t i = 0; i < d; ++i)
      if (zm >> i & 1) Z.set(ys[i]);
    auto r = solve_pdd_cocluster_fixed_Z(inst, mod, Z, opt);
    if (r && (!best || r->value > best->value)) best = r;
  }
  return best;
}

inline Answer solve_pdd_by_cocluster_modulator(const Instance& inst, const Modulator& mod,
                                               const SolveOptions& opt = {}) {
  auto best = max_pd_by_cocluster_modulator(inst, mod, opt);
  if (!best || best->value < inst.D) return std::nullopt;
  if (!is_solution(inst, best->S)) throw std::logic_error("co-cluster solver produced an invalid witness");
  return make_solution(inst, best->S);
}

}  // namespace pdd
