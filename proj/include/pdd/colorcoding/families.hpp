#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/oracle.hpp"

namespace pdd {

enum class Mode { exact, monte_carlo };

struct SolveOptions {
  Mode mode = Mode::exact;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  // upper bound on estimated work (table cells, subsets, colorings)
  std::uint64_t budget = 2'000'000'000;
};

inline constexpr std::uint64_t kExactFamilyBudget = 1'000'000;
// scan steps the greedy exact constructions may spend
inline constexpr std::uint64_t kExactBuildBudget = 2'000'000'000;

inline const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "mc"; }

// Functions [n] -> [k], colors 1..k.
struct HashFamily {
  std::size_t n = 0, k = 0;
  std::vector<std::vector<int>> functions;
  bool exact = true;
  double epsilon = 0;
};

struct UniversalSet {
  std::size_t n = 0, k = 0;
  std::vector<std::vector<char>> sets;  // membership vectors of length n
  bool exact = true;
  double epsilon = 0;
};

inline std::uint64_t monte_carlo_hash_count(std::size_t k, double eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("epsilon must lie in (0, 1)");
  double c = std::ceil(std::exp(static_cast<double>(k)) * static_cast<double>(k) * std::log(1.0 / eps));
  return static_cast<std::uint64_t>(std::max(1.0, c));
}

inline std::uint64_t monte_carlo_universal_count(std::size_t k, double eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("epsilon must lie in (0, 1)");
  double c = std::ceil(std::pow(2.0, static_cast<double>(k)) *
                       (static_cast<double>(k) * std::log(2.0) + std::log(1.0 / eps)));
  return static_cast<std::uint64_t>(std::max(1.0, c));
}

namespace detail {

// All k-subsets of [n] in lexicographic order, flattened.
inline std::vector<std::uint16_t> all_subsets(std::size_t n, std::size_t k) {
  std::vector<std::uint16_t> out;
  std::vector<std::uint16_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return out;
  for (;;) {
    out.insert(out.end(), idx.begin(), idx.end());
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = static_cast<std::uint16_t>(idx[j - 1] + 1);
  }
  return out;
}

inline bool injective_on(const std::vector<int>& f, const std::uint16_t* z, std::size_t k) {
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t bit = std::uint64_t{1} << (f[z[i]] - 1);
    if (seen & bit) return false;
    seen |= bit;
  }
  return true;
}

}  // namespace detail

inline bool is_perfect(const HashFamily& h) {
  if (h.k == 0) return true;
  auto subs = detail::all_subsets(h.n, h.k);
  for (std::size_t s = 0; s < subs.size(); s += h.k) {
    bool hit = false;
    for (const auto& f : h.functions)
      if (detail::injective_on(f, &subs[s], h.k)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

// Exact: greedy cover of all k-subsets; each new function is random but
// forced injective on the first uncovered subset. Monte Carlo: independent
// uniform colorings.
inline HashFamily build_perfect_hash_family(std::size_t n, std::size_t k, Mode mode, std::uint64_t seed,
                                            double eps = 0.1, std::uint64_t max_functions = UINT64_MAX) {
  if (k < 1 || k > n) throw PreconditionError("hash family needs 1 <= k <= n");
  if (k > 64) throw PreconditionError("at most 64 colors are supported");
  HashFamily h{n, k, {}, mode == Mode::exact, mode == Mode::exact ? 0.0 : eps};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> col(1, static_cast<int>(k));
  if (k == n) {
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 1);
    h.functions.push_back(id);
    h.exact = true;
    return h;
  }
  if (k == 1) {
    h.functions.push_back(std::vector<int>(n, 1));
    h.exact = true;
    return h;
  }
  if (mode == Mode::monte_carlo) {
    std::uint64_t count = monte_carlo_hash_count(k, eps);
    if (count > max_functions)
      throw BudgetExceeded("Monte Carlo family needs " + std::to_string(count) + " colorings");
    h.functions.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<int> f(n);
      for (auto& c : f) c = col(rng);
      h.functions.push_back(std::move(f));
    }
    return h;
  }
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > kExactFamilyBudget)
    throw BudgetExceeded("exact hash family over C(" + std::to_string(n) + "," + std::to_string(k) +
                         ") subsets exceeds the verification budget");
  // a random coloring is injective on a fixed k-set with probability k!/k^k
  double hit = 1;
  for (std::size_t i = 1; i <= k; ++i) hit *= static_cast<double>(i) / static_cast<double>(k);
  const double expected = std::min(static_cast<double>(subsets),
                                   std::ceil(std::log(static_cast<double>(subsets)) / hit) + 1);
  if (expected > static_cast<double>(max_functions) ||
      expected * static_cast<double>(subsets) * static_cast<double>(k) > static_cast<double>(kExactBuildBudget))
    throw BudgetExceeded("exact hash family for n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                         " needs about " + std::to_string(static_cast<std::uint64_t>(expected)) + " functions");
  auto subs = detail::all_subsets(n, k);
  std::vector<std::size_t> open(subs.size() / k);
  std::iota(open.begin(), open.end(), 0);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  while (!open.empty()) {
    if (h.functions.size() >= max_functions)
      throw BudgetExceeded("exact hash family exceeds " + std::to_string(max_functions) + " functions");
    std::vector<int> f(n);
    for (auto& c : f) c = col(rng);
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::uint16_t* z = &subs[open.front() * k];
    for (std::size_t i = 0; i < k; ++i) f[z[i]] = perm[i];
    std::vector<std::size_t> rest;
    for (std::size_t s : open)
      if (!detail::injective_on(f, &subs[s * k], k)) rest.push_back(s);
    open.swap(rest);
    h.functions.push_back(std::move(f));
  }
  return h;
}

inline bool is_universal(const UniversalSet& u) {
  auto subs = detail::all_subsets(u.n, u.k);
  if (u.k == 0) return !u.sets.empty();
  for (std::size_t s = 0; s < subs.size(); s += u.k) {
    std::vector<char> seen(std::size_t{1} << u.k, 0);
    for (const auto& a : u.sets) {
      std::size_t t = 0;
      for (std::size_t i = 0; i < u.k; ++i)
        if (a[subs[s + i]]) t |= std::size_t{1} << i;
      seen[t] = 1;
    }
    for (char c : seen)
      if (!c) return false;
  }
  return true;
}

// Exact: greedy cover of all (S, trace) requirements, each new set forced to
// realise the first open one. Monte Carlo: uniform random subsets.
inline UniversalSet build_universal_set(std::size_t n, std::size_t k, Mode mode, std::uint64_t seed,
                                        double eps = 0.1, std::uint64_t max_sets = UINT64_MAX) {
  if (k > n) throw PreconditionError("universal set needs k <= n");
  if (k > 20) throw PreconditionError("universal sets support at most 20 positions");
  UniversalSet u{n, k, {}, mode == Mode::exact, mode == Mode::exact ? 0.0 : eps};
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution half(0.5);
  if (k == 0) {
    u.sets.push_back(std::vector<char>(n, 0));
    u.exact = true;
    return u;
  }
  if (mode == Mode::monte_carlo) {
    std::uint64_t count = monte_carlo_universal_count(k, eps);
    if (count > max_sets) throw BudgetExceeded("Monte Carlo universal set needs " + std::to_string(count) + " sets");
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<char> a(n);
      for (auto& b : a) b = half(rng);
      u.sets.push_back(std::move(a));
    }
    return u;
  }
  const std::uint64_t traces = std::uint64_t{1} << k;
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > kExactFamilyBudget || subsets * traces > kExactFamilyBudget * 4)
    throw BudgetExceeded("exact universal set for n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                         " exceeds the verification budget");
  const double requirements = static_cast<double>(subsets) * static_cast<double>(traces);
  const double expected =
      std::min(requirements, std::ceil(static_cast<double>(traces) * (std::log(requirements) + 1)));
  if (expected > static_cast<double>(max_sets) ||
      expected * static_cast<double>(subsets) * static_cast<double>(k) > static_cast<double>(kExactBuildBudget))
    throw BudgetExceeded("exact universal set for n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                         " needs about " + std::to_string(static_cast<std::uint64_t>(expected)) + " sets");
  auto subs = detail::all_subsets(n, k);
  const std::size_t S = subs.size() / k;
  std::vector<std::vector<char>> covered(S, std::vector<char>(traces, 0));
  std::vector<std::uint64_t> left(S, traces);
  std::size_t first = 0;
  std::uint64_t next_trace = 0;
  while (first < S) {
    if (left[first] == 0) {
      ++first;
      next_trace = 0;
      continue;
    }
    while (covered[first][next_trace]) ++next_trace;
    if (u.sets.size() >= max_sets) throw BudgetExceeded("exact universal set exceeds the set budget");
    std::vector<char> a(n);
    for (auto& b : a) b = half(rng);
    for (std::size_t i = 0; i < k; ++i) a[subs[first * k + i]] = (next_trace >> i) & 1;
    for (std::size_t s = first; s < S; ++s) {
      if (left[s] == 0) continue;
      std::size_t t = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (a[subs[s * k + i]]) t |= std::size_t{1} << i;
      if (!covered[s][t]) {
        covered[s][t] = 1;
        --left[s];
      }
    }
    u.sets.push_back(std::move(a));
  }
  return u;
}

}  // namespace pdd
