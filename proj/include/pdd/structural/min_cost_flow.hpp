#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

struct FlowNetwork {
  struct Arc {
    int from = 0, to = 0;
    std::int64_t cap = 0, cost = 0;
  };
  int num_vertices = 0;
  int s = 0, t = 0;
  std::vector<Arc> arcs;

  int add_vertex() { return num_vertices++; }
  std::size_t add_arc(int from, int to, std::int64_t cap, std::int64_t cost) {
    arcs.push_back({from, to, cap, cost});
    return arcs.size() - 1;
  }
};

struct FlowResult {
  std::int64_t cost = 0;
  std::vector<std::int64_t> flow;  // per arc of the network
};

// Integral flow of value exactly F and minimum cost (successive shortest
// paths with potentials), nullopt if the maximum flow is below F.
inline std::optional<FlowResult> min_cost_flow(const FlowNetwork& net, std::int64_t F) {
  const int V = net.num_vertices;
  if (net.s < 0 || net.s >= V || net.t < 0 || net.t >= V) throw DomainError("flow terminals out of range");
  if (F < 0) throw DomainError("negative flow value");
  struct E {
    int to;
    std::int64_t cap, cost;
    std::size_t rev;
  };
  std::vector<std::vector<E>> g(V);
  std::vector<std::pair<int, std::size_t>> where;
  for (const auto& a : net.arcs) {
    if (a.cap < 0) throw DomainError("negative capacity");
    if (a.from < 0 || a.from >= V || a.to < 0 || a.to >= V) throw DomainError("arc endpoint out of range");
    if (a.from == a.to) throw DomainError("self-loop in the flow network");
    where.push_back({a.from, g[a.from].size()});
    g[a.from].push_back({a.to, a.cap, a.cost, g[a.to].size()});
    g[a.to].push_back({a.from, 0, -a.cost, g[a.from].size() - 1});
  }
  constexpr std::int64_t INF = std::numeric_limits<std::int64_t>::max() / 4;

  // initial potentials: one pass in topological order when the residual
  // arcs are acyclic, Bellman-Ford from s otherwise
  std::vector<std::int64_t> h(V, INF);
  h[net.s] = 0;
  std::vector<int> indeg(V, 0), order;
  for (int u = 0; u < V; ++u)
    for (const E& e : g[u])
      if (e.cap > 0) ++indeg[e.to];
  for (int u = 0; u < V; ++u)
    if (indeg[u] == 0) order.push_back(u);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const E& e : g[order[i]])
      if (e.cap > 0 && --indeg[e.to] == 0) order.push_back(e.to);
  if (order.size() == static_cast<std::size_t>(V)) {
    for (int u : order) {
      if (h[u] == INF) continue;
      for (const E& e : g[u])
        if (e.cap > 0) h[e.to] = std::min(h[e.to], h[u] + e.cost);
    }
  } else {
    for (int round = 0; round < V; ++round) {
      bool changed = false;
      for (int u = 0; u < V; ++u) {
        if (h[u] == INF) continue;
        for (const E& e : g[u])
          if (e.cap > 0 && h[u] + e.cost < h[e.to]) {
            h[e.to] = h[u] + e.cost;
            changed = true;
          }
      }
      if (!changed) break;
      if (round == V - 1) throw PreconditionError("negative-cost cycle in the flow network");
    }
  }
  std::int64_t hmax = 0;
  for (auto x : h)
    if (x != INF) hmax = std::max(hmax, x);
  for (auto& x : h)
    if (x == INF) x = hmax;

  std::int64_t flow = 0, cost = 0;
  std::vector<std::int64_t> dist(V);
  using QE = std::pair<std::int64_t, int>;
  std::vector<char> seen(V);
  std::vector<std::size_t> next(V);
  auto augment = [&](auto&& self, int u, std::int64_t limit) -> std::int64_t {
    if (u == net.t) return limit;
    seen[u] = 1;
    for (; next[u] < g[u].size(); ++next[u]) {
      E& e = g[u][next[u]];
      if (e.cap <= 0 || seen[e.to] || e.cost + h[u] - h[e.to] != 0) continue;
      const std::int64_t d = self(self, e.to, std::min(limit, e.cap));
      if (d > 0) {
        e.cap -= d;
        g[e.to][e.rev].cap += d;
        cost += d * e.cost;
        return d;
      }
    }
    return 0;
  };
  while (flow < F) {
    std::fill(dist.begin(), dist.end(), INF);
    dist[net.s] = 0;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    pq.push({0, net.s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == net.t) break;
      for (const E& e : g[u]) {
        if (e.cap <= 0) continue;
        const std::int64_t nd = d + e.cost + h[u] - h[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          pq.push({nd, e.to});
        }
      }
    }
    if (dist[net.t] == INF) return std::nullopt;
    // vertices not settled before t move by dist(t), keeping reduced costs >= 0
    for (int v = 0; v < V; ++v) h[v] += std::min(dist[v], dist[net.t]);
    // augment along every path of zero reduced cost before the next search
    std::fill(next.begin(), next.end(), 0);
    for (;;) {
      std::fill(seen.begin(), seen.end(), 0);
      const std::int64_t pushed = augment(augment, net.s, F - flow);
      if (pushed == 0) break;
      flow += pushed;
      if (flow == F) break;
    }
  }
  FlowResult r{cost, {}};
  for (std::size_t i = 0; i < net.arcs.size(); ++i)
    r.flow.push_back(net.arcs[i].cap - g[where[i].first][where[i].second].cap);
  return r;
}

}  // namespace pdd
