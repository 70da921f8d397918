#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/io/instance_format.hpp"

namespace pdd::gen {

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> edges;
};

// ---------------------------------------------------------------- reductions

// Vertex Cover on cubic graphs. Leaf v per vertex; per edge e an inner vertex
// with weight N-1 carrying leaves [u,e], [v,e] fed by u and v.
inline Instance gen_from_vertex_cover(const Graph& G, std::uint64_t k, Weight N = 0) {
  std::vector<int> deg(G.n, 0);
  for (auto [u, v] : G.edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= G.n || static_cast<std::size_t>(v) >= G.n || u == v)
      throw PreconditionError("graph edge out of range");
    ++deg[u];
    ++deg[v];
  }
  for (std::size_t v = 0; v < G.n; ++v)
    if (deg[v] != 3) throw PreconditionError("vertex " + std::to_string(v) + " does not have degree 3");
  const std::size_t m = G.edges.size();
  const std::size_t num_taxa = G.n + 2 * m;
  if (N == 0) N = num_taxa + 2;
  if (N <= m) throw PreconditionError("N must exceed the number of edges");

  std::vector<VertexId> parent{kNoVertex};
  std::vector<Weight> weight{0};
  std::vector<TaxonId> taxon{kNoTaxon};
  std::vector<std::string> labels{"r"};
  Instance inst;
  for (std::size_t v = 0; v < G.n; ++v) {
    parent.push_back(0);
    weight.push_back(1);
    taxon.push_back(static_cast<TaxonId>(v));
    inst.names.push_back("v" + std::to_string(v));
    labels.push_back(inst.names.back());
  }
  std::vector<Arc> arcs;
  for (std::size_t j = 0; j < m; ++j) {
    auto [u, v] = G.edges[j];
    VertexId e = static_cast<VertexId>(parent.size());
    parent.push_back(0);
    weight.push_back(N - 1);
    taxon.push_back(kNoTaxon);
    labels.push_back("e" + std::to_string(j));
    for (int end : {u, v}) {
      parent.push_back(e);
      weight.push_back(1);
      TaxonId t = static_cast<TaxonId>(inst.names.size());
      taxon.push_back(t);
      inst.names.push_back("v" + std::to_string(end) + "e" + std::to_string(j));
      labels.push_back(inst.names.back());
      arcs.push_back({static_cast<TaxonId>(end), t});
    }
  }
  inst.tree = PhyloTree(parent, weight, taxon, num_taxa, PhyloTree::Arity::strict, labels);
  inst.web = FoodWeb(num_taxa, arcs);
  inst.k = m + k;
  inst.D = checked_add(checked_mul(N, m), k);
  return inst;
}

struct BipartiteGraph {
  std::size_t red = 0, blue = 0;
  std::vector<std::pair<int, int>> edges;  // (red index, blue index)
};

// Red-Blue Non-Blocker: star with weight 1 on red and 2 on blue leaves; each
// red vertex is prey of its blue neighbours.
inline Instance gen_from_red_blue_nonblocker(const BipartiteGraph& G, std::uint64_t k) {
  const std::size_t n = G.red + G.blue;
  if (k > n) throw PreconditionError("k exceeds the number of vertices");
  std::vector<VertexId> parent{kNoVertex};
  std::vector<Weight> weight{0};
  std::vector<TaxonId> taxon{kNoTaxon};
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    parent.push_back(0);
    weight.push_back(i < G.red ? 1 : 2);
    taxon.push_back(static_cast<TaxonId>(i));
    inst.names.push_back(i < G.red ? "r" + std::to_string(i) : "b" + std::to_string(i - G.red));
  }
  std::vector<Arc> arcs;
  std::vector<char> touched(G.blue, 0);
  for (auto [r, b] : G.edges) {
    if (r < 0 || b < 0 || static_cast<std::size_t>(r) >= G.red || static_cast<std::size_t>(b) >= G.blue)
      throw PreconditionError("bipartite edge out of range");
    arcs.push_back({static_cast<TaxonId>(r), static_cast<TaxonId>(G.red + b)});
    touched[b] = 1;
  }
  for (std::size_t b = 0; b < G.blue; ++b)
    if (!touched[b]) throw PreconditionError("blue vertex " + std::to_string(b) + " has no red neighbour");
  inst.tree = PhyloTree(parent, weight, taxon, n, PhyloTree::Arity::relaxed);
  inst.web = FoodWeb(n, arcs);
  inst.k = n - k;
  inst.D = 2 * G.blue + G.red - k;
  return inst;
}

struct SetCoverInstance {
  std::size_t universe = 0;
  std::vector<std::vector<int>> sets;
};

// Set Cover: star with weight 1 on set leaves and 2 on element leaves; an
// element is fed by every set containing it.
inline Instance gen_from_set_cover(const SetCoverInstance& sc, std::uint64_t k) {
  const std::size_t q = sc.sets.size(), u = sc.universe;
  std::vector<char> covered(u, 0);
  for (const auto& s : sc.sets)
    for (int e : s) {
      if (e < 0 || static_cast<std::size_t>(e) >= u) throw PreconditionError("set element out of range");
      covered[e] = 1;
    }
  for (std::size_t e = 0; e < u; ++e)
    if (!covered[e]) throw PreconditionError("element " + std::to_string(e) + " is in no set");
  const std::size_t n = q + u;
  std::vector<VertexId> parent{kNoVertex};
  std::vector<Weight> weight{0};
  std::vector<TaxonId> taxon{kNoTaxon};
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    parent.push_back(0);
    weight.push_back(i < q ? 1 : 2);
    taxon.push_back(static_cast<TaxonId>(i));
    inst.names.push_back(i < q ? "q" + std::to_string(i) : "u" + std::to_string(i - q));
  }
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < q; ++i)
    for (int e : sc.sets[i]) arcs.push_back({static_cast<TaxonId>(i), static_cast<TaxonId>(q + e)});
  inst.tree = PhyloTree(parent, weight, taxon, n, PhyloTree::Arity::relaxed);
  inst.web = FoodWeb(n, arcs);
  inst.k = k + u;
  inst.D = k + 2 * u;
  return inst;
}

// ------------------------------------------------------------------- random

enum class TreeShape { star, caterpillar, random, shallow };
enum class WebShape { dag, cluster, cocluster, forest, outforest, isolated_arcs, path };

struct RandomParams {
  std::size_t n = 8;
  double density = 0.3;
  Weight min_weight = 1;
  Weight max_weight = 5;
  TreeShape tree = TreeShape::random;
  WebShape web = WebShape::dag;
  std::size_t modulator = 0;  // |Y| for cluster and co-cluster webs
  double k_fraction = 0.5;
  double d_fraction = 0.5;
  std::uint64_t seed = 0;
};

namespace detail {

struct TreeArrays {
  std::vector<VertexId> parent{kNoVertex};
  std::vector<Weight> weight{0};
  std::vector<TaxonId> taxon{kNoTaxon};

  VertexId add(VertexId p, Weight w, TaxonId t) {
    parent.push_back(p);
    weight.push_back(w);
    taxon.push_back(t);
    return static_cast<VertexId>(parent.size() - 1);
  }
};

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

// Builds a tree over the given taxa below `root`; leaves listed in `taxa`.
inline void grow_tree(TreeArrays& t, VertexId root, const std::vector<TaxonId>& taxa, TreeShape shape,
                      std::mt19937_64& rng, const std::function<Weight()>& w) {
  const std::size_t n = taxa.size();
  if (n == 0) return;
  if (shape == TreeShape::star || n <= 2) {
    for (TaxonId x : taxa) t.add(root, w(), x);
    return;
  }
  if (shape == TreeShape::caterpillar) {
    VertexId spine = root;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 2 < n) {
        t.add(spine, w(), taxa[i]);
        spine = t.add(spine, w(), kNoTaxon);
      } else {
        t.add(spine, w(), taxa[i]);
      }
    }
    return;
  }
  if (shape == TreeShape::shallow) {
    std::vector<TaxonId> rest = taxa;
    std::shuffle(rest.begin(), rest.end(), rng);
    std::size_t i = 0, groups = 0;
    while (i < n) {
      std::size_t g = 1 + pick(rng, 3);
      if (i + g > n) g = n - i;
      if (g == 1 || (groups == 0 && g == n)) {
        for (std::size_t j = 0; j < g; ++j) t.add(root, w(), rest[i + j]);
      } else {
        VertexId u = t.add(root, w(), kNoTaxon);
        for (std::size_t j = 0; j < g; ++j) t.add(u, w(), rest[i + j]);
      }
      i += g;
      ++groups;
    }
    return;
  }
  // random: merge random groups of 2 or 3 until two or three remain
  struct Node {
    std::vector<Node*> kids;
    TaxonId taxon;
  };
  std::vector<std::unique_ptr<Node>> pool;
  std::vector<Node*> open;
  for (TaxonId x : taxa) {
    pool.push_back(std::make_unique<Node>(Node{{}, x}));
    open.push_back(pool.back().get());
  }
  while (open.size() > 3 || (open.size() == 3 && coin(rng, 0.5))) {
    std::size_t g = coin(rng, 0.25) ? 3 : 2;
    g = std::min(g, open.size() - 1);
    auto parent = std::make_unique<Node>(Node{{}, kNoTaxon});
    for (std::size_t j = 0; j < g; ++j) {
      std::size_t i = pick(rng, open.size());
      parent->kids.push_back(open[i]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
    }
    open.push_back(parent.get());
    pool.push_back(std::move(parent));
  }
  std::function<void(Node*, VertexId)> emit = [&](Node* nd, VertexId p) {
    VertexId v = t.add(p, w(), nd->taxon);
    for (Node* c : nd->kids) emit(c, v);
  };
  for (Node* nd : open) emit(nd, root);
}

}  // namespace detail

inline Instance gen_random(const RandomParams& p) {
  std::mt19937_64 rng(p.seed);
  const std::size_t n = p.n;
  if (n == 0) throw PreconditionError("random instances need at least one taxon");
  if (p.min_weight == 0 || p.min_weight > p.max_weight) throw PreconditionError("invalid weight range");
  auto w = [&]() { return std::uniform_int_distribution<Weight>(p.min_weight, p.max_weight)(rng); };

  detail::TreeArrays t;
  std::vector<TaxonId> taxa(n);
  std::iota(taxa.begin(), taxa.end(), 0);
  detail::grow_tree(t, 0, taxa, p.tree, rng, w);

  // random topological order
  std::vector<TaxonId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
  std::vector<Arc> arcs;
  auto oriented = [&](TaxonId a, TaxonId b) {
    return rank[a] < rank[b] ? Arc{a, b} : Arc{b, a};
  };

  const std::size_t d = std::min(p.modulator, n);
  switch (p.web) {
    case WebShape::dag:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (detail::coin(rng, p.density)) arcs.push_back({order[i], order[j]});
      break;
    case WebShape::cluster:
    case WebShape::cocluster: {
      // modulator = a random d-subset; the rest is split into groups
      std::vector<TaxonId> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> group(n, -1);
      int g = -1;
      for (std::size_t i = d; i < n; ++i) {
        if (g < 0 || detail::coin(rng, 0.4)) ++g;
        group[perm[i]] = g;
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          bool in_y = group[a] < 0 || group[b] < 0;
          bool add;
          if (in_y)
            add = detail::coin(rng, p.density);
          else if (p.web == WebShape::cluster)
            add = group[a] == group[b];
          else
            add = group[a] != group[b];
          if (add) arcs.push_back(oriented(static_cast<TaxonId>(a), static_cast<TaxonId>(b)));
        }
      break;
    }
    case WebShape::forest:
    case WebShape::outforest:
      for (std::size_t i = 1; i < n; ++i) {
        if (!detail::coin(rng, p.density)) continue;
        TaxonId parent = order[detail::pick(rng, i)];
        TaxonId child = order[i];
        if (p.web == WebShape::outforest || detail::coin(rng, 0.5))
          arcs.push_back({parent, child});
        else
          arcs.push_back({child, parent});
      }
      break;
    case WebShape::isolated_arcs: {
      std::vector<TaxonId> perm = order;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i + 1 < n; i += 2)
        if (detail::coin(rng, p.density)) arcs.push_back(oriented(perm[i], perm[i + 1]));
      break;
    }
    case WebShape::path:
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (detail::coin(rng, 0.5))
          arcs.push_back({order[i], order[i + 1]});
        else
          arcs.push_back({order[i + 1], order[i]});
      break;
  }

  Instance inst;
  for (std::size_t i = 0; i < n; ++i) inst.names.push_back("x" + std::to_string(i));
  inst.tree = PhyloTree(t.parent, t.weight, t.taxon, n, PhyloTree::Arity::strict);
  inst.web = FoodWeb(n, arcs);
  inst.k = static_cast<std::uint64_t>(std::llround(p.k_fraction * static_cast<double>(n)));
  inst.D = static_cast<Weight>(std::llround(p.d_fraction * static_cast<double>(inst.tree.total_weight())));
  return io::canonicalize(inst);
}

// Isolated arcs and isolated taxa; the root's subtrees hold either only
// sources or only predators.
inline Instance gen_source_separating(std::size_t n, double arc_density, double k_fraction, double d_fraction,
                                      std::uint64_t seed, Weight max_weight = 5) {
  std::mt19937_64 rng(seed);
  auto w = [&]() { return std::uniform_int_distribution<Weight>(1, max_weight)(rng); };
  std::vector<TaxonId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Arc> arcs;
  std::vector<char> is_pred(n, 0);
  for (std::size_t i = 0; i + 1 < n; i += 2)
    if (detail::coin(rng, arc_density)) {
      arcs.push_back({perm[i], perm[i + 1]});
      is_pred[perm[i + 1]] = 1;
    }
  std::vector<TaxonId> sources, preds;
  for (std::size_t x = 0; x < n; ++x) (is_pred[x] ? preds : sources).push_back(static_cast<TaxonId>(x));
  // a few root subtrees per side
  std::vector<std::vector<TaxonId>> groups;
  for (const auto* side : {&sources, &preds}) {
    std::vector<TaxonId> rest = *side;
    std::shuffle(rest.begin(), rest.end(), rng);
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t g = 1 + detail::pick(rng, std::min<std::size_t>(rest.size() - i, 6));
      groups.emplace_back(rest.begin() + static_cast<std::ptrdiff_t>(i),
                          rest.begin() + static_cast<std::ptrdiff_t>(i + g));
      i += g;
    }
  }
  detail::TreeArrays t;
  if (groups.size() == 1) {
    detail::grow_tree(t, 0, groups[0], TreeShape::random, rng, w);
  } else {
    for (const auto& group : groups) {
      if (group.size() == 1) {
        t.add(0, w(), group[0]);
      } else {
        VertexId u = t.add(0, w(), kNoTaxon);
        detail::grow_tree(t, u, group, TreeShape::random, rng, w);
      }
    }
  }
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) inst.names.push_back("x" + std::to_string(i));
  inst.tree = PhyloTree(t.parent, t.weight, t.taxon, n, PhyloTree::Arity::strict);
  inst.web = FoodWeb(n, arcs);
  inst.k = static_cast<std::uint64_t>(std::llround(k_fraction * static_cast<double>(n)));
  inst.D = static_cast<Weight>(std::llround(d_fraction * static_cast<double>(inst.tree.total_weight())));
  return io::canonicalize(inst);
}

// ------------------------------------------------------------ source payloads

// Uniform-ish random simple cubic graph by the pairing model with restarts.
inline Graph random_cubic_graph(std::size_t n, std::uint64_t seed) {
  if (n < 4 || n % 2) throw PreconditionError("cubic graphs need an even number of at least 4 vertices");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<int> points;
    for (std::size_t v = 0; v < n; ++v)
      for (int c = 0; c < 3; ++c) points.push_back(static_cast<int>(v));
    std::shuffle(points.begin(), points.end(), rng);
    Graph G{n, {}};
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      const std::pair<int, int> e = std::minmax(points[i], points[i + 1]);
      if (e.first == e.second || std::find(G.edges.begin(), G.edges.end(), e) != G.edges.end()) simple = false;
      G.edges.push_back(e);
    }
    if (simple) return G;
  }
  throw BudgetExceeded("no simple cubic graph found");
}

inline BipartiteGraph random_bipartite(std::size_t red, std::size_t blue, double density, std::uint64_t seed) {
  if (red == 0) throw PreconditionError("at least one red vertex is needed");
  std::mt19937_64 rng(seed);
  BipartiteGraph G{red, blue, {}};
  for (std::size_t b = 0; b < blue; ++b) {
    bool any = false;
    for (std::size_t r = 0; r < red; ++r)
      if (detail::coin(rng, density)) {
        G.edges.push_back({static_cast<int>(r), static_cast<int>(b)});
        any = true;
      }
    if (!any) G.edges.push_back({static_cast<int>(detail::pick(rng, red)), static_cast<int>(b)});
  }
  return G;
}

inline SetCoverInstance random_set_cover(std::size_t universe, std::size_t sets, double density, std::uint64_t seed) {
  if (sets == 0 && universe > 0) throw PreconditionError("at least one set is needed");
  std::mt19937_64 rng(seed);
  SetCoverInstance sc{universe, std::vector<std::vector<int>>(sets)};
  for (std::size_t e = 0; e < universe; ++e) {
    bool any = false;
    for (std::size_t q = 0; q < sets; ++q)
      if (detail::coin(rng, density)) {
        sc.sets[q].push_back(static_cast<int>(e));
        any = true;
      }
    if (!any) sc.sets[detail::pick(rng, sets)].push_back(static_cast<int>(e));
  }
  return sc;
}

}  // namespace pdd::gen
