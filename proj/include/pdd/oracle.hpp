#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Binomial coefficient saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

// Viable subsets of the given size in lexicographic order of their sorted id
// sequences. A branch dies once a chosen non-source has all of its prey
// decided and none chosen. The callback may return false to stop.
inline void enumerate_viable_sets(const FoodWeb& web, std::size_t size,
                                  const std::function<bool(const TaxonSet&)>& visit) {
  const std::size_t n = web.size();
  if (size > n) throw PreconditionError("size exceeds the number of taxa");
  // last_prey[x]: largest prey id, used to detect when x's fate is sealed
  std::vector<int> last_prey(n, -1);
  for (std::size_t x = 0; x < n; ++x)
    for (TaxonId p : web.prey(static_cast<TaxonId>(x))) last_prey[x] = std::max(last_prey[x], p);
  // pending[i]: chosen taxa whose last prey is i
  std::vector<std::vector<TaxonId>> pending(n);
  TaxonSet S(n);
  bool stop = false;

  auto fed = [&](TaxonId x) {
    for (TaxonId p : web.prey(x))
      if (S.test(p)) return true;
    return false;
  };

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t chosen) {
    if (stop) return;
    if (chosen == size) {
      // every chosen taxon still waiting must be fed already
      for (std::size_t j = i; j < n; ++j)
        for (TaxonId x : pending[j])
          if (!fed(x)) return;
      if (!visit(S)) stop = true;
      return;
    }
    if (n - i < size - chosen) return;
    const TaxonId x = static_cast<TaxonId>(i);
    auto seal = [&]() {
      for (TaxonId y : pending[i])
        if (!fed(y)) return false;
      return true;
    };
    // include x
    S.set(i);
    const bool deferred = !web.is_source(x) && last_prey[i] > static_cast<int>(i);
    const bool x_ok = web.is_source(x) || deferred || fed(x);
    if (x_ok && seal()) {
      if (deferred) pending[last_prey[i]].push_back(x);
      rec(i + 1, chosen + 1);
      if (deferred) pending[last_prey[i]].pop_back();
    }
    S.reset(i);
    if (stop) return;
    // exclude x
    if (seal()) rec(i + 1, chosen);
  };
  rec(0, 0);
}

inline std::vector<TaxonSet> viable_sets(const FoodWeb& web, std::size_t size) {
  std::vector<TaxonSet> out;
  enumerate_viable_sets(web, size, [&](const TaxonSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

struct OracleOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
};

namespace detail {

inline void check_oracle_budget(const Instance& inst, const OracleOptions& opt) {
  const std::uint64_t n = inst.n();
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, n);
  const std::uint64_t c = binomial(n, std::min(k, n - k));
  if (c > opt.budget)
    throw BudgetExceeded("brute force needs C(" + std::to_string(n) + "," + std::to_string(std::min(k, n - k)) +
                         ") subsets, above the budget of " + std::to_string(opt.budget));
}

// Visits every viable set of size exactly min(k, n). Small k enumerates the
// sets directly; large k enumerates the complements of size n-k.
inline void for_each_candidate(const Instance& inst, const std::function<bool(const TaxonSet&)>& visit) {
  const std::size_t n = inst.n();
  const std::size_t k = static_cast<std::size_t>(std::min<std::uint64_t>(inst.k, n));
  if (k <= n - k) {
    enumerate_viable_sets(inst.web, k, visit);
    return;
  }
  const std::size_t r = n - k;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  TaxonSet S(n);
  for (;;) {
    S.set();
    for (std::size_t i : idx) S.reset(i);
    if (is_viable(inst.web, S) && !visit(S)) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// Exact maximum PD over viable sets of size at most k. Every viable set
// extends to a viable set of size exactly min(k, n), so only those are scanned.
inline Solution brute_force_optimum(const Instance& inst, const OracleOptions& opt = {}) {
  detail::check_oracle_budget(inst, opt);
  Solution best{TaxonSet(inst.n()), 0, std::vector<Arc>{}};
  bool have = false;
  detail::for_each_candidate(inst, [&](const TaxonSet& S) {
    Weight v = pd(inst.tree, S);
    if (!have || v > best.pd_value) {
      best.taxa = S;
      best.pd_value = v;
      have = true;
    }
    return true;
  });
  best.certificate = viability_certificate(inst.web, best.taxa);
  return best;
}

inline Answer brute_force_decide(const Instance& inst, const OracleOptions& opt = {}) {
  detail::check_oracle_budget(inst, opt);
  if (inst.D == 0) return Solution{TaxonSet(inst.n()), 0, std::vector<Arc>{}};
  Answer found;
  detail::for_each_candidate(inst, [&](const TaxonSet& S) {
    Weight v = pd(inst.tree, S);
    if (v >= inst.D) {
      found = make_solution(inst, S);
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace pdd
