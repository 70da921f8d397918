#pragma once

#include <cstdint>
#include <vector>

#include "pdd/colorcoding/k_colored.hpp"
#include "pdd/core.hpp"

namespace pdd {

// Edge color sets from prefix-weight blocks. Edges are the non-root tree
// vertices in preorder; edge_colors is indexed by tree vertex.
struct EdgeColorAssignment {
  std::size_t D = 0, k = 0;
  std::vector<VertexId> edges;
  std::vector<Weight> prefix;  // W_0 .. W_|E|
  Weight W = 0;
  std::vector<ColorMask> edge_colors;
  std::vector<ColorMask> taxon_colors;  // union over the root path
  std::vector<int> hat;                 // per taxon, 1..k
};

// f has W entries with values in 1..D, g has n entries with values in 1..k.
inline EdgeColorAssignment build_edge_color_assignment(const PhyloTree& tree, std::size_t D, std::size_t k,
                                                       const std::vector<int>& f, const std::vector<int>& g) {
  if (D > 64) throw PreconditionError("at most 64 diversity colors are supported");
  EdgeColorAssignment a;
  a.D = D;
  a.k = k;
  a.prefix.push_back(0);
  for (VertexId v : tree.preorder())
    if (v != tree.root()) {
      a.edges.push_back(v);
      a.prefix.push_back(checked_add(a.prefix.back(), tree.weight(v)));
    }
  a.W = a.prefix.back();
  if (f.size() != a.W) throw PreconditionError("f must be defined on all of [W]");
  if (g.size() != tree.num_taxa()) throw PreconditionError("g must be defined on every taxon");
  for (int c : f)
    if (c < 1 || static_cast<std::size_t>(c) > D) throw PreconditionError("f maps outside [D]");
  for (int c : g)
    if (c < 1 || static_cast<std::size_t>(c) > k) throw PreconditionError("g maps outside [k]");
  a.edge_colors.assign(tree.size(), 0);
  for (std::size_t j = 0; j < a.edges.size(); ++j)
    for (Weight i = a.prefix[j]; i < a.prefix[j + 1]; ++i) a.edge_colors[a.edges[j]] |= color_bit(f[i]);
  std::vector<ColorMask> down(tree.size(), 0);
  for (VertexId v : tree.preorder())
    if (v != tree.root()) down[v] = down[tree.parent(v)] | a.edge_colors[v];
  a.taxon_colors.assign(tree.num_taxa(), 0);
  for (std::size_t x = 0; x < tree.num_taxa(); ++x) a.taxon_colors[x] = down[tree.leaf(static_cast<TaxonId>(x))];
  a.hat = g;
  return a;
}

}  // namespace pdd
