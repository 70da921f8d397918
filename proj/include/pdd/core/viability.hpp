#pragma once

#include <optional>
#include <vector>

#include "pdd/core/diversity.hpp"

namespace pdd {

// Z-viability: every taxon of A without prey in A has no prey in Z.
inline bool is_viable(const FoodWeb& web, const TaxonSet& A, const TaxonSet& Z) {
  if (A.size() != web.size() || Z.size() != web.size())
    throw DomainError("taxon set does not match the food web");
  if (!A.is_subset_of(Z)) throw PreconditionError("A is not a subset of Z");
  bool ok = true;
  for_each_member(A, [&](TaxonId x) {
    if (!ok) return;
    bool fed_in_A = false, has_prey_in_Z = false;
    for (TaxonId p : web.prey(x)) {
      if (A.test(p)) {
        fed_in_A = true;
        break;
      }
      if (Z.test(p)) has_prey_in_Z = true;
    }
    if (!fed_in_A && has_prey_in_Z) ok = false;
  });
  return ok;
}

inline bool is_viable(const FoodWeb& web, const TaxonSet& A) {
  if (A.size() != web.size()) throw DomainError("taxon set does not match the food web");
  bool ok = true;
  for_each_member(A, [&](TaxonId x) {
    if (!ok || web.is_source(x)) return;
    bool fed = false;
    for (TaxonId p : web.prey(x))
      if (A.test(p)) {
        fed = true;
        break;
      }
    ok = fed;
  });
  return ok;
}

// One in-arc per non-source member, picking the smallest prey id.
inline std::optional<std::vector<Arc>> viability_certificate(const FoodWeb& web, const TaxonSet& A) {
  if (A.size() != web.size()) throw DomainError("taxon set does not match the food web");
  std::vector<Arc> arcs;
  bool ok = true;
  for_each_member(A, [&](TaxonId x) {
    if (!ok || web.is_source(x)) return;
    for (TaxonId p : web.prey(x))
      if (A.test(p)) {
        arcs.push_back({p, x});
        return;
      }
    ok = false;
  });
  if (!ok) return std::nullopt;
  return arcs;
}

// Checks that the arcs form an in-forest on A whose roots are sources.
inline bool is_valid_certificate(const FoodWeb& web, const TaxonSet& A, const std::vector<Arc>& arcs) {
  std::vector<int> indeg(web.size(), 0);
  for (const Arc& a : arcs) {
    if (!A.test(a.prey) || !A.test(a.predator) || !web.has_arc(a.prey, a.predator)) return false;
    if (++indeg[a.predator] > 1) return false;
  }
  bool ok = true;
  for_each_member(A, [&](TaxonId x) {
    if (indeg[x] == 0 && !web.is_source(x)) ok = false;
  });
  return ok;
}

// Pads a viable set up to exactly k taxa; greedy by marginal PD, then id.
inline TaxonSet extend_to_size_k(const PhyloTree& tree, const FoodWeb& web, TaxonSet S, std::size_t k) {
  const std::size_t n = web.size();
  if (k > n) throw PreconditionError("k exceeds the number of taxa");
  if (S.count() > k) throw PreconditionError("S is larger than k");
  if (!is_viable(web, S)) throw PreconditionError("S is not viable");
  std::vector<char> covered(tree.size(), 0);
  for_each_member(S, [&](TaxonId x) {
    for (VertexId v = tree.leaf(x); v != tree.root() && !covered[v]; v = tree.parent(v)) covered[v] = 1;
  });
  while (S.count() < k) {
    TaxonId best = kNoTaxon;
    Weight best_gain = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (S.test(x)) continue;
      bool addable = web.is_source(static_cast<TaxonId>(x));
      for (TaxonId p : web.prey(static_cast<TaxonId>(x)))
        if (S.test(p)) addable = true;
      if (!addable) continue;
      Weight gain = 0;
      for (VertexId v = tree.leaf(static_cast<TaxonId>(x)); v != tree.root() && !covered[v];
           v = tree.parent(v))
        gain += tree.weight(v);
      if (best == kNoTaxon || gain > best_gain) {
        best = static_cast<TaxonId>(x);
        best_gain = gain;
      }
    }
    S.set(best);
    for (VertexId v = tree.leaf(best); v != tree.root() && !covered[v]; v = tree.parent(v)) covered[v] = 1;
  }
  return S;
}

inline Solution make_solution(const Instance& inst, const TaxonSet& S) {
  return Solution{S, pd(inst.tree, S), viability_certificate(inst.web, S)};
}

// True iff S is a solution of inst: viable, at most k taxa, PD at least D.
inline bool is_solution(const Instance& inst, const TaxonSet& S) {
  return S.size() == inst.n() && S.count() <= inst.k && is_viable(inst.web, S) &&
         pd(inst.tree, S) >= inst.D;
}

}  // namespace pdd
