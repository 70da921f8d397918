#pragma once

#include <algorithm>
#include <vector>

#include "pdd/core/instance.hpp"

namespace pdd {

inline void check_universe(const PhyloTree& tree, const TaxonSet& A) {
  if (A.size() != tree.num_taxa()) {
    throw DomainError("taxon set over " + std::to_string(A.size()) + " ids used with a tree of " +
                      std::to_string(tree.num_taxa()) + " taxa");
  }
}

// Sum of the weights of edges with an offspring in A.
inline Weight pd(const PhyloTree& tree, const TaxonSet& A) {
  check_universe(tree, A);
  std::vector<char> seen(tree.size(), 0);
  Weight total = 0;
  for_each_member(A, [&](TaxonId x) {
    VertexId v = tree.leaf(x);
    while (v != tree.root() && !seen[v]) {
      seen[v] = 1;
      total = checked_add(total, tree.weight(v));
      v = tree.parent(v);
    }
  });
  return total;
}

struct SpanningSubtree {
  VertexId top = kNoVertex;
  std::vector<VertexId> vertices;
  // (parent, child) pairs
  std::vector<std::pair<VertexId, VertexId>> edges;
  Weight total_weight = 0;
};

// Minimal subtree connecting the given vertices.
inline SpanningSubtree spanning_subtree(const PhyloTree& tree, const std::vector<VertexId>& vs) {
  if (vs.empty()) throw PreconditionError("spanning subtree of an empty vertex set");
  for (VertexId v : vs)
    if (v < 0 || static_cast<std::size_t>(v) >= tree.size())
      throw DomainError("unknown vertex id " + std::to_string(v));
  auto lca = [&](VertexId a, VertexId b) {
    while (tree.depth(a) > tree.depth(b)) a = tree.parent(a);
    while (tree.depth(b) > tree.depth(a)) b = tree.parent(b);
    while (a != b) {
      a = tree.parent(a);
      b = tree.parent(b);
    }
    return a;
  };
  SpanningSubtree out;
  out.top = vs.front();
  for (VertexId v : vs) out.top = lca(out.top, v);
  std::vector<char> in(tree.size(), 0);
  in[out.top] = 1;
  for (VertexId v : vs) {
    while (!in[v]) {
      in[v] = 1;
      out.edges.emplace_back(tree.parent(v), v);
      out.total_weight = checked_add(out.total_weight, tree.weight(v));
      v = tree.parent(v);
    }
  }
  for (std::size_t v = 0; v < tree.size(); ++v)
    if (in[v]) out.vertices.push_back(static_cast<VertexId>(v));
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

inline Weight pd(const Instance& inst, const std::vector<std::string>& taxa) {
  return pd(inst.tree, inst.set_of(taxa));
}

}  // namespace pdd
