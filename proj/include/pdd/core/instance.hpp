#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdd/core/food_web.hpp"
#include "pdd/core/phylo_tree.hpp"

namespace pdd {

struct Instance {
  PhyloTree tree;
  FoodWeb web;
  std::vector<std::string> names;
  std::uint64_t k = 0;
  Weight D = 0;

  std::size_t n() const { return web.size(); }
  std::int64_t kbar() const { return static_cast<std::int64_t>(n()) - static_cast<std::int64_t>(k); }
  std::int64_t Dbar() const { return to_signed(tree.total_weight()) - to_signed(D); }

  void validate() const {
    if (tree.num_taxa() != web.size())
      throw PreconditionError("tree has " + std::to_string(tree.num_taxa()) + " taxa but the web has " +
                              std::to_string(web.size()) + " vertices");
    if (names.size() != web.size()) throw PreconditionError("taxon name table has the wrong size");
    std::unordered_map<std::string, int> seen;
    for (const auto& s : names)
      if (++seen[s] > 1) throw PreconditionError("duplicate taxon name '" + s + "'");
  }

  TaxonId id_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<TaxonId>(i);
    throw DomainError("unknown taxon '" + std::string(name) + "'");
  }

  TaxonSet set_of(const std::vector<std::string>& taxa) const {
    TaxonSet s(n());
    for (const auto& t : taxa) s.set(id_of(t));
    return s;
  }

  std::vector<std::string> names_of(const TaxonSet& s) const {
    std::vector<std::string> out;
    for_each_member(s, [&](TaxonId x) { out.push_back(names[x]); });
    return out;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.tree == b.tree && a.web == b.web && a.names == b.names && a.k == b.k && a.D == b.D;
  }
};

struct Solution {
  TaxonSet taxa;
  Weight pd_value = 0;
  std::optional<std::vector<Arc>> certificate;
};

// Engaged means yes.
using Answer = std::optional<Solution>;

// Instance restricted to a taxon subset; origin[new id] = old id.
struct Restricted {
  Instance instance;
  std::vector<TaxonId> origin;
};

inline Restricted restrict_taxa(const Instance& inst, const TaxonSet& keep) {
  const std::size_t n = inst.n();
  std::vector<TaxonId> map(n, kNoTaxon);
  Restricted out;
  for (std::size_t x = 0; x < n; ++x)
    if (keep.test(x)) {
      map[x] = static_cast<TaxonId>(out.origin.size());
      out.origin.push_back(static_cast<TaxonId>(x));
    }
  TreeEditor ed(inst.tree);
  out.instance.tree = ed.build(out.origin.size(), map).tree;
  out.instance.web = inst.web.induced(keep);
  for (TaxonId x : out.origin) out.instance.names.push_back(inst.names[x]);
  out.instance.k = inst.k;
  out.instance.D = inst.D;
  return out;
}

inline TaxonSet lift(const TaxonSet& s, const std::vector<TaxonId>& origin, std::size_t n_original) {
  TaxonSet out(n_original);
  for_each_member(s, [&](TaxonId x) { out.set(origin[x]); });
  return out;
}

}  // namespace pdd
