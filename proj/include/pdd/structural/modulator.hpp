#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

enum class GraphClass { cluster, cocluster };

inline const char* class_name(GraphClass c) { return c == GraphClass::cluster ? "cluster" : "co-cluster"; }

// Deletion set Y with the structure of F - Y: the cliques of a cluster graph,
// or the independent sets of a co-cluster graph.
struct Modulator {
  TaxonSet Y;
  GraphClass target = GraphClass::cluster;
  std::vector<std::vector<TaxonId>> parts;
  std::size_t size() const { return Y.count(); }
};

namespace detail {

// Adjacency matrix of the underlying graph, complemented for co-clusters.
inline std::vector<std::vector<char>> class_matrix(const FoodWeb& web, GraphClass target) {
  const std::size_t n = web.size();
  const char base = target == GraphClass::cocluster ? 1 : 0;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, base));
  for (std::size_t x = 0; x < n; ++x) adj[x][x] = 0;
  for (const Arc& a : web.arcs()) adj[a.prey][a.predator] = adj[a.predator][a.prey] = static_cast<char>(1 - base);
  return adj;
}

// Some induced path a-b-c among the vertices not in Y.
inline std::optional<std::array<TaxonId, 3>> find_p3(const std::vector<std::vector<char>>& adj, const TaxonSet& Y) {
  const std::size_t n = adj.size();
  std::vector<TaxonId> nb;
  for (std::size_t b = 0; b < n; ++b) {
    if (Y.test(b)) continue;
    nb.clear();
    for (std::size_t a = 0; a < n; ++a)
      if (adj[b][a] && !Y.test(a)) nb.push_back(static_cast<TaxonId>(a));
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]][nb[j]]) return std::array<TaxonId, 3>{nb[i], static_cast<TaxonId>(b), nb[j]};
  }
  return std::nullopt;
}

inline std::vector<std::vector<TaxonId>> components(const std::vector<std::vector<char>>& adj, const TaxonSet& Y) {
  const std::size_t n = adj.size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<TaxonId>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (Y.test(s) || seen[s]) continue;
    out.emplace_back();
    std::vector<TaxonId> stack{static_cast<TaxonId>(s)};
    seen[s] = 1;
    while (!stack.empty()) {
      TaxonId u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (std::size_t v = 0; v < n; ++v)
        if (adj[u][v] && !Y.test(v) && !seen[v]) {
          seen[v] = 1;
          stack.push_back(static_cast<TaxonId>(v));
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

}  // namespace detail

// Validates Y and fills in the parts; nullopt if F - Y is not in the class.
inline std::optional<Modulator> make_modulator(const FoodWeb& web, const TaxonSet& Y, GraphClass target) {
  if (Y.size() != web.size()) throw DomainError("modulator does not match the food web");
  auto adj = detail::class_matrix(web, target);
  if (detail::find_p3(adj, Y)) return std::nullopt;
  return Modulator{Y, target, detail::components(adj, Y)};
}

inline bool is_cluster_modulator(const FoodWeb& web, const TaxonSet& Y) {
  return make_modulator(web, Y, GraphClass::cluster).has_value();
}

inline bool is_cocluster_modulator(const FoodWeb& web, const TaxonSet& Y) {
  return make_modulator(web, Y, GraphClass::cocluster).has_value();
}

// Smallest modulator of size at most d_max by branching on induced P3s.
inline std::optional<Modulator> find_modulator(const FoodWeb& web, GraphClass target, std::size_t d_max) {
  const std::size_t n = web.size();
  auto adj = detail::class_matrix(web, target);
  TaxonSet Y(n);
  std::function<bool(std::size_t)> branch = [&](std::size_t left) {
    auto p = detail::find_p3(adj, Y);
    if (!p) return true;
    if (left == 0) return false;
    for (TaxonId v : *p) {
      Y.set(v);
      if (branch(left - 1)) return true;
      Y.reset(v);
    }
    return false;
  };
  for (std::size_t d = 0; d <= std::min(d_max, n); ++d) {
    Y.reset();
    if (branch(d)) return Modulator{Y, target, detail::components(adj, Y)};
  }
  return std::nullopt;
}

}  // namespace pdd
