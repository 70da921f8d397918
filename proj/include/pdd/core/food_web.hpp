#pragma once

#include <algorithm>
#include <compare>
#include <queue>
#include <string>
#include <vector>

#include "pdd/core/errors.hpp"
#include "pdd/core/taxon_set.hpp"

namespace pdd {

// prey -> predator
struct Arc {
  TaxonId prey = kNoTaxon;
  TaxonId predator = kNoTaxon;
  auto operator<=>(const Arc&) const = default;
};

class FoodWeb {
 public:
  FoodWeb() = default;

  FoodWeb(std::size_t n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    for (const Arc& a : arcs_) {
      if (a.prey < 0 || a.predator < 0 || static_cast<std::size_t>(a.prey) >= n ||
          static_cast<std::size_t>(a.predator) >= n)
        throw DomainError("arc refers to an unknown taxon");
      if (a.prey == a.predator)
        throw PreconditionError("self-loop on taxon " + std::to_string(a.prey));
    }
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    prey_.assign(n, {});
    pred_.assign(n, {});
    for (const Arc& a : arcs_) {
      pred_[a.prey].push_back(a.predator);
      prey_[a.predator].push_back(a.prey);
    }
    for (auto& v : prey_) std::sort(v.begin(), v.end());
    compute_topological_order();
  }

  std::size_t size() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t num_arcs() const { return arcs_.size(); }
  const std::vector<TaxonId>& prey(TaxonId x) const { return prey_[x]; }
  const std::vector<TaxonId>& predators(TaxonId x) const { return pred_[x]; }
  bool is_source(TaxonId x) const { return prey_[x].empty(); }
  bool has_arc(TaxonId prey, TaxonId predator) const {
    const auto& p = prey_[predator];
    return std::binary_search(p.begin(), p.end(), prey);
  }

  TaxonSet sources() const {
    TaxonSet s(n_);
    for (std::size_t x = 0; x < n_; ++x)
      if (prey_[x].empty()) s.set(x);
    return s;
  }

  // Kahn's algorithm, smallest id first.
  const std::vector<TaxonId>& topological_order() const { return topo_; }

  // X>=x: taxa reachable from x, including x.
  TaxonSet reachable_from(TaxonId x) const { return closure(x, pred_); }
  // X<=x: taxa that reach x, including x.
  TaxonSet reaching(TaxonId x) const { return closure(x, prey_); }

  // Multi-source BFS hop distance from the nearest source.
  std::vector<std::size_t> source_distances() const {
    std::vector<std::size_t> dist(n_, static_cast<std::size_t>(-1));
    std::queue<TaxonId> q;
    for (std::size_t x = 0; x < n_; ++x)
      if (prey_[x].empty()) {
        dist[x] = 0;
        q.push(static_cast<TaxonId>(x));
      }
    while (!q.empty()) {
      TaxonId u = q.front();
      q.pop();
      for (TaxonId v : pred_[u])
        if (dist[v] == static_cast<std::size_t>(-1)) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    return dist;
  }

  // Subweb induced by keep; kept taxa are renumbered in increasing order.
  FoodWeb induced(const TaxonSet& keep) const {
    std::vector<TaxonId> map(n_, kNoTaxon);
    std::size_t m = 0;
    for (std::size_t x = 0; x < n_; ++x)
      if (keep.test(x)) map[x] = static_cast<TaxonId>(m++);
    std::vector<Arc> out;
    for (const Arc& a : arcs_)
      if (map[a.prey] != kNoTaxon && map[a.predator] != kNoTaxon)
        out.push_back({map[a.prey], map[a.predator]});
    return FoodWeb(m, std::move(out));
  }

  FoodWeb without_arcs(const std::vector<Arc>& removed) const {
    std::vector<Arc> out;
    for (const Arc& a : arcs_)
      if (!std::binary_search(removed.begin(), removed.end(), a)) out.push_back(a);
    return FoodWeb(n_, std::move(out));
  }

  // Neighbours in the underlying undirected graph, sorted.
  std::vector<std::vector<TaxonId>> underlying_adjacency() const {
    std::vector<std::vector<TaxonId>> adj(n_);
    for (const Arc& a : arcs_) {
      adj[a.prey].push_back(a.predator);
      adj[a.predator].push_back(a.prey);
    }
    for (auto& v : adj) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
  }

  friend bool operator==(const FoodWeb& a, const FoodWeb& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  TaxonSet closure(TaxonId x, const std::vector<std::vector<TaxonId>>& next) const {
    TaxonSet s(n_);
    std::vector<TaxonId> stack{x};
    s.set(x);
    while (!stack.empty()) {
      TaxonId u = stack.back();
      stack.pop_back();
      for (TaxonId v : next[u])
        if (!s.test(v)) {
          s.set(v);
          stack.push_back(v);
        }
    }
    return s;
  }

  void compute_topological_order() {
    std::vector<std::size_t> indeg(n_);
    for (std::size_t x = 0; x < n_; ++x) indeg[x] = prey_[x].size();
    std::priority_queue<TaxonId, std::vector<TaxonId>, std::greater<>> ready;
    for (std::size_t x = 0; x < n_; ++x)
      if (indeg[x] == 0) ready.push(static_cast<TaxonId>(x));
    topo_.clear();
    while (!ready.empty()) {
      TaxonId u = ready.top();
      ready.pop();
      topo_.push_back(u);
      for (TaxonId v : pred_[u])
        if (--indeg[v] == 0) ready.push(v);
    }
    if (topo_.size() != n_) {
      for (std::size_t x = 0; x < n_; ++x)
        if (indeg[x] != 0)
          throw PreconditionError("food web has a cycle reaching taxon " + std::to_string(x));
    }
  }

  std::size_t n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<TaxonId>> prey_;
  std::vector<std::vector<TaxonId>> pred_;
  std::vector<TaxonId> topo_;
};

}  // namespace pdd
