#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

// Plain decomposition: a forest of bags under node `root`.
struct TreeDecomposition {
  std::vector<std::vector<TaxonId>> bags;
  std::vector<int> parent;  // -1 at the root
  int root = -1;
};

struct NiceTreeDecomposition {
  enum class Kind { leaf, introduce, forget, join };
  struct Node {
    Kind kind = Kind::leaf;
    TaxonId vertex = kNoTaxon;  // introduced or forgotten vertex
    std::vector<int> children;
    std::vector<TaxonId> bag;  // sorted
  };
  std::vector<Node> nodes;
  int root = -1;

  std::size_t size() const { return nodes.size(); }
  int width() const {
    std::size_t w = 0;
    for (const Node& t : nodes) w = std::max(w, t.bag.size());
    return static_cast<int>(w) - 1;
  }
  // Children before parents.
  std::vector<int> postorder() const {
    std::vector<int> out, stack{root};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      out.push_back(t);
      for (int c : nodes[t].children) stack.push_back(c);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

inline const char* kind_name(NiceTreeDecomposition::Kind k) {
  switch (k) {
    case NiceTreeDecomposition::Kind::leaf: return "leaf";
    case NiceTreeDecomposition::Kind::introduce: return "introduce";
    case NiceTreeDecomposition::Kind::forget: return "forget";
    case NiceTreeDecomposition::Kind::join: return "join";
  }
  return "?";
}

namespace detail {

inline bool is_forest(const std::vector<std::vector<TaxonId>>& adj) {
  std::size_t edges = 0;
  for (const auto& a : adj) edges += a.size();
  edges /= 2;
  std::vector<int> comp(adj.size(), -1);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (comp[s] != -1) continue;
    ++comps;
    std::vector<TaxonId> stack{static_cast<TaxonId>(s)};
    comp[s] = 1;
    while (!stack.empty()) {
      TaxonId u = stack.back();
      stack.pop_back();
      for (TaxonId v : adj[u])
        if (comp[v] == -1) {
          comp[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return edges + comps == adj.size();
}

// Elimination order with the later neighbourhood of each vertex.
struct Elimination {
  std::vector<TaxonId> order;
  std::vector<std::vector<TaxonId>> later;
};

inline Elimination peel_forest(const std::vector<std::vector<TaxonId>>& adj) {
  const std::size_t n = adj.size();
  Elimination e;
  e.later.assign(n, {});
  std::vector<std::size_t> deg(n);
  std::vector<char> gone(n, 0);
  std::vector<TaxonId> queue;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] <= 1) queue.push_back(static_cast<TaxonId>(v));
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    TaxonId v = queue[h];
    if (gone[v]) continue;
    gone[v] = 1;
    e.order.push_back(v);
    for (TaxonId u : adj[v])
      if (!gone[u]) {
        e.later[v].push_back(u);
        if (--deg[u] == 1 || deg[u] == 0) queue.push_back(u);
      }
  }
  return e;
}

inline Elimination min_fill(const std::vector<std::vector<TaxonId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::set<TaxonId>> g(n);
  for (std::size_t v = 0; v < n; ++v) g[v].insert(adj[v].begin(), adj[v].end());
  std::vector<char> gone(n, 0);
  Elimination e;
  e.later.assign(n, {});
  for (std::size_t step = 0; step < n; ++step) {
    TaxonId best = kNoTaxon;
    std::size_t best_fill = 0, best_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::size_t fill = 0;
      for (auto a = g[v].begin(); a != g[v].end(); ++a)
        for (auto b = std::next(a); b != g[v].end(); ++b)
          if (!g[*a].count(*b)) ++fill;
      if (best == kNoTaxon || fill < best_fill || (fill == best_fill && g[v].size() < best_deg)) {
        best = static_cast<TaxonId>(v);
        best_fill = fill;
        best_deg = g[v].size();
      }
    }
    gone[best] = 1;
    e.order.push_back(best);
    e.later[best].assign(g[best].begin(), g[best].end());
    for (TaxonId a : g[best]) {
      g[a].erase(best);
      for (TaxonId b : g[best])
        if (a != b) g[a].insert(b);
    }
    g[best].clear();
  }
  return e;
}

}  // namespace detail

// Bags {v} ∪ later(v); each hangs below the bag of its earliest later
// neighbour, component roots below an empty bag.
inline TreeDecomposition decomposition_from_elimination(std::size_t n, const detail::Elimination& e) {
  TreeDecomposition td;
  std::vector<int> pos(n);
  for (std::size_t i = 0; i < e.order.size(); ++i) pos[e.order[i]] = static_cast<int>(i);
  td.bags.resize(n + 1);
  td.parent.assign(n + 1, -1);
  td.root = static_cast<int>(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& b = td.bags[v];
    b = e.later[v];
    b.push_back(static_cast<TaxonId>(v));
    std::sort(b.begin(), b.end());
    TaxonId up = kNoTaxon;
    for (TaxonId u : e.later[v])
      if (up == kNoTaxon || pos[u] < pos[up]) up = u;
    td.parent[v] = up == kNoTaxon ? td.root : up;
  }
  return td;
}

// Binary joins, with forget/introduce chains between differing bags.
inline NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  using Kind = NiceTreeDecomposition::Kind;
  NiceTreeDecomposition nice;
  const std::size_t N = td.bags.size();
  if (td.root < 0 || static_cast<std::size_t>(td.root) >= N) throw PreconditionError("decomposition has no root");
  std::vector<std::vector<int>> ch(N);
  for (std::size_t t = 0; t < N; ++t)
    if (static_cast<int>(t) != td.root) {
      if (td.parent[t] < 0 || static_cast<std::size_t>(td.parent[t]) >= N)
        throw PreconditionError("decomposition node " + std::to_string(t) + " has no parent");
      ch[td.parent[t]].push_back(static_cast<int>(t));
    }
  auto add = [&](Kind k, TaxonId v, std::vector<int> children, std::vector<TaxonId> bag) {
    nice.nodes.push_back({k, v, std::move(children), std::move(bag)});
    return static_cast<int>(nice.nodes.size() - 1);
  };
  // from node `top` with bag `have` to bag `want`
  auto morph = [&](int top, std::vector<TaxonId> have, const std::vector<TaxonId>& want) {
    for (TaxonId v : std::vector<TaxonId>(have)) {
      if (std::binary_search(want.begin(), want.end(), v)) continue;
      have.erase(std::find(have.begin(), have.end(), v));
      top = add(Kind::forget, v, {top}, have);
    }
    for (TaxonId v : want) {
      if (std::binary_search(have.begin(), have.end(), v)) continue;
      have.insert(std::upper_bound(have.begin(), have.end(), v), v);
      top = add(Kind::introduce, v, {top}, have);
    }
    return top;
  };
  std::vector<int> top(N, -1);
  std::vector<std::size_t> order;
  std::vector<int> stack{td.root};
  std::vector<char> seen(N, 0);
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    if (seen[t]) throw PreconditionError("decomposition is not a tree");
    seen[t] = 1;
    order.push_back(static_cast<std::size_t>(t));
    for (int c : ch[t]) stack.push_back(c);
  }
  if (order.size() != N) throw PreconditionError("decomposition is not connected");
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t t = *it;
    std::vector<TaxonId> bag = td.bags[t];
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    std::vector<int> branches;
    for (int c : ch[t]) {
      std::vector<TaxonId> cb = td.bags[c];
      std::sort(cb.begin(), cb.end());
      cb.erase(std::unique(cb.begin(), cb.end()), cb.end());
      branches.push_back(morph(top[c], cb, bag));
    }
    if (branches.empty()) branches.push_back(morph(add(Kind::leaf, kNoTaxon, {}, {}), {}, bag));
    int acc = branches[0];
    for (std::size_t i = 1; i < branches.size(); ++i) acc = add(Kind::join, kNoTaxon, {acc, branches[i]}, bag);
    top[t] = acc;
  }
  std::vector<TaxonId> root_bag = td.bags[td.root];
  std::sort(root_bag.begin(), root_bag.end());
  root_bag.erase(std::unique(root_bag.begin(), root_bag.end()), root_bag.end());
  nice.root = morph(top[td.root], root_bag, {});
  return nice;
}

// Empty string when `nice` is a valid nice decomposition of the graph.
inline std::string validate_decomposition(const NiceTreeDecomposition& nice,
                                          const std::vector<std::vector<TaxonId>>& adj) {
  using Kind = NiceTreeDecomposition::Kind;
  const std::size_t N = nice.nodes.size();
  const std::size_t n = adj.size();
  if (N == 0 || nice.root < 0 || static_cast<std::size_t>(nice.root) >= N) return "missing root";
  if (!nice.nodes[nice.root].bag.empty()) return "root bag is not empty";
  std::vector<int> parent(N, -2);
  parent[nice.root] = -1;
  std::vector<int> stack{nice.root};
  std::size_t reached = 0;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    ++reached;
    for (int c : nice.nodes[t].children) {
      if (c < 0 || static_cast<std::size_t>(c) >= N) return "node " + std::to_string(t) + " has an unknown child";
      if (parent[c] != -2) return "node " + std::to_string(c) + " has two parents";
      parent[c] = t;
      stack.push_back(c);
    }
  }
  if (reached != N) return "some nodes are unreachable from the root";

  for (std::size_t t = 0; t < N; ++t) {
    const auto& nd = nice.nodes[t];
    const std::string at = "node " + std::to_string(t) + ": ";
    for (std::size_t i = 0; i < nd.bag.size(); ++i) {
      if (nd.bag[i] < 0 || static_cast<std::size_t>(nd.bag[i]) >= n) return at + "bag member out of range";
      if (i > 0 && nd.bag[i - 1] >= nd.bag[i]) return at + "bag is not sorted";
    }
    auto bag_of = [&](int c) -> const std::vector<TaxonId>& { return nice.nodes[c].bag; };
    switch (nd.kind) {
      case Kind::leaf:
        if (!nd.children.empty() || !nd.bag.empty()) return at + "leaf must have no children and an empty bag";
        break;
      case Kind::introduce: {
        if (nd.children.size() != 1) return at + "introduce needs one child";
        auto b = bag_of(nd.children[0]);
        if (std::binary_search(b.begin(), b.end(), nd.vertex)) return at + "introduced vertex already present";
        b.insert(std::upper_bound(b.begin(), b.end(), nd.vertex), nd.vertex);
        if (b != nd.bag) return at + "introduce bag mismatch";
        break;
      }
      case Kind::forget: {
        if (nd.children.size() != 1) return at + "forget needs one child";
        auto b = bag_of(nd.children[0]);
        auto it = std::lower_bound(b.begin(), b.end(), nd.vertex);
        if (it == b.end() || *it != nd.vertex) return at + "forgotten vertex not in the child";
        b.erase(it);
        if (b != nd.bag) return at + "forget bag mismatch";
        break;
      }
      case Kind::join:
        if (nd.children.size() != 2) return at + "join needs two children";
        if (bag_of(nd.children[0]) != nd.bag || bag_of(nd.children[1]) != nd.bag) return at + "join bags differ";
        break;
    }
  }

  // occurrence of each vertex: exactly one topmost node
  std::vector<std::size_t> tops(n, 0);
  for (std::size_t t = 0; t < N; ++t)
    for (TaxonId v : nice.nodes[t].bag) {
      int p = parent[t];
      if (p < 0 || !std::binary_search(nice.nodes[p].bag.begin(), nice.nodes[p].bag.end(), v)) ++tops[v];
    }
  for (std::size_t v = 0; v < n; ++v) {
    if (tops[v] == 0) return "vertex " + std::to_string(v) + " is in no bag";
    if (tops[v] > 1) return "bags holding vertex " + std::to_string(v) + " are not connected";
  }
  std::vector<std::set<TaxonId>> covered(n);
  for (const auto& nd : nice.nodes)
    for (TaxonId a : nd.bag)
      for (TaxonId b : nd.bag)
        if (a < b) covered[a].insert(b);
  for (std::size_t v = 0; v < n; ++v)
    for (TaxonId u : adj[v])
      if (static_cast<TaxonId>(v) < u && !covered[v].count(u))
        return "edge " + std::to_string(v) + "-" + std::to_string(u) + " is in no bag";
  return {};
}

inline NiceTreeDecomposition build_nice_tree_decomposition(const FoodWeb& web) {
  const auto adj = web.underlying_adjacency();
  const auto e = detail::is_forest(adj) ? detail::peel_forest(adj) : detail::min_fill(adj);
  NiceTreeDecomposition nice = make_nice(decomposition_from_elimination(adj.size(), e));
  std::string err = validate_decomposition(nice, adj);
  if (!err.empty()) throw std::logic_error("constructed decomposition is invalid: " + err);
  return nice;
}

// Text form, one node per line:  <id> <kind> <children...> : <members...>
// with kind leaf/introduce/forget/join, or `bag` for a plain decomposition
// (converted to nice form on reading). Lines starting with '#' are comments.
inline std::string write_decomposition(const NiceTreeDecomposition& nice) {
  std::ostringstream out;
  out << "# root " << nice.root << "\n";
  for (std::size_t t = 0; t < nice.nodes.size(); ++t) {
    const auto& nd = nice.nodes[t];
    out << t << ' ' << kind_name(nd.kind);
    for (int c : nd.children) out << ' ' << c;
    out << " :";
    for (TaxonId v : nd.bag) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

inline NiceTreeDecomposition read_decomposition(const std::string& text) {
  using Kind = NiceTreeDecomposition::Kind;
  struct Line {
    std::string kind;
    std::vector<int> children;
    std::vector<TaxonId> bag;
  };
  std::vector<Line> lines;
  std::vector<int> ids;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = raw.find(':');
    if (colon == std::string::npos) throw ParseError(lineno, 1, "expected ':' before the bag members");
    std::istringstream head(raw.substr(0, colon)), tail(raw.substr(colon + 1));
    int id;
    Line l;
    if (!(head >> id >> l.kind) || id < 0) throw ParseError(lineno, 1, "expected a node id and a kind");
    int c;
    while (head >> c) l.children.push_back(c);
    if (!head.eof()) throw ParseError(lineno, 1, "bad child id");
    long long v;
    while (tail >> v) {
      if (v < 0) throw ParseError(lineno, colon + 1, "negative bag member");
      l.bag.push_back(static_cast<TaxonId>(v));
    }
    if (!tail.eof()) throw ParseError(lineno, colon + 1, "bad bag member");
    std::sort(l.bag.begin(), l.bag.end());
    l.bag.erase(std::unique(l.bag.begin(), l.bag.end()), l.bag.end());
    if (static_cast<std::size_t>(id) >= lines.size()) lines.resize(id + 1);
    if (!lines[id].kind.empty()) throw ParseError(lineno, 1, "duplicate node id " + std::to_string(id));
    lines[id] = std::move(l);
  }
  if (lines.empty()) throw ParseError(lineno, 1, "empty decomposition");
  std::vector<int> parent(lines.size(), -1);
  for (std::size_t t = 0; t < lines.size(); ++t) {
    if (lines[t].kind.empty()) throw ParseError(lineno, 1, "node ids must be 0..N-1 without gaps");
    for (int c : lines[t].children) {
      if (c < 0 || static_cast<std::size_t>(c) >= lines.size() || parent[c] != -1)
        throw ParseError(lineno, 1, "bad child reference " + std::to_string(c));
      parent[c] = static_cast<int>(t);
    }
  }
  int root = -1;
  for (std::size_t t = 0; t < lines.size(); ++t)
    if (parent[t] == -1) {
      if (root != -1) throw ParseError(lineno, 1, "more than one root");
      root = static_cast<int>(t);
    }
  if (root == -1) throw ParseError(lineno, 1, "no root");

  bool plain = lines[0].kind == "bag";
  for (const Line& l : lines)
    if ((l.kind == "bag") != plain) throw ParseError(lineno, 1, "mixed plain and nice node kinds");
  if (plain) {
    TreeDecomposition td;
    td.root = root;
    td.parent = parent;
    for (const Line& l : lines) td.bags.push_back(l.bag);
    return make_nice(td);
  }
  NiceTreeDecomposition nice;
  nice.root = root;
  for (const Line& l : lines) {
    NiceTreeDecomposition::Node nd;
    nd.children = l.children;
    nd.bag = l.bag;
    if (l.kind == "leaf") nd.kind = Kind::leaf;
    else if (l.kind == "join") nd.kind = Kind::join;
    else if (l.kind == "introduce" || l.kind == "forget") {
      nd.kind = l.kind == "introduce" ? Kind::introduce : Kind::forget;
      if (l.children.size() != 1) throw ParseError(lineno, 1, l.kind + " needs one child");
      const auto& cb = lines[l.children[0]].bag;
      const auto& big = nd.kind == Kind::introduce ? l.bag : cb;
      const auto& small = nd.kind == Kind::introduce ? cb : l.bag;
      std::vector<TaxonId> diff;
      std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(diff));
      if (diff.size() != 1) throw ParseError(lineno, 1, l.kind + " bags must differ in one vertex");
      nd.vertex = diff[0];
    } else
      throw ParseError(lineno, 1, "unknown node kind '" + l.kind + "'");
    nice.nodes.push_back(std::move(nd));
  }
  return nice;
}

}  // namespace pdd
