#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pdd/colorcoding.hpp"
#include "pdd/core.hpp"

namespace pdd {

// Optimum of a maximisation: the chosen taxa and their diversity.
struct Selection {
  TaxonSet S;
  Weight value = 0;
};

namespace detail {

inline constexpr std::int64_t kMinusInf = std::numeric_limits<std::int64_t>::min();

inline void require_star(const Instance& inst, const char* what) {
  if (!inst.tree.is_star()) throw PreconditionError(std::string(what) + " needs a star phylogenetic tree");
}

// Edge weight above each taxon in a star.
inline std::vector<Weight> star_weights(const PhyloTree& tree) {
  std::vector<Weight> w(tree.num_taxa());
  for (std::size_t x = 0; x < w.size(); ++x) w[x] = tree.weight(tree.leaf(static_cast<TaxonId>(x)));
  return w;
}

// Taxa reachable from a source while avoiding `blocked`.
inline TaxonSet reachable_avoiding(const FoodWeb& web, const TaxonSet& blocked) {
  TaxonSet seen(web.size());
  std::vector<TaxonId> stack;
  for (std::size_t x = 0; x < web.size(); ++x)
    if (web.is_source(static_cast<TaxonId>(x)) && !blocked.test(x)) {
      seen.set(x);
      stack.push_back(static_cast<TaxonId>(x));
    }
  while (!stack.empty()) {
    TaxonId x = stack.back();
    stack.pop_back();
    for (TaxonId y : web.predators(x))
      if (!seen.test(y) && !blocked.test(y)) {
        seen.set(y);
        stack.push_back(y);
      }
  }
  return seen;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }

}  // namespace detail
}  // namespace pdd
