#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pdd/core/errors.hpp"

namespace pdd {

// Rooted tree with a vertex coloring (colors >= 1). parent[root] == -1.
class PatternTree {
 public:
  PatternTree() : PatternTree({-1}, {1}) {}

  PatternTree(std::vector<int> parent, std::vector<int> color) : parent_(std::move(parent)), color_(std::move(color)) {
    const std::size_t n = parent_.size();
    if (n == 0) throw PreconditionError("pattern tree has no vertices");
    if (color_.size() != n) throw PreconditionError("pattern coloring has wrong length");
    children_.assign(n, {});
    root_ = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (color_[v] < 1) throw PreconditionError("pattern colors start at 1");
      int p = parent_[v];
      if (p == -1) {
        if (root_ != -1) throw PreconditionError("pattern tree has more than one root");
        root_ = static_cast<int>(v);
      } else {
        if (p < 0 || static_cast<std::size_t>(p) >= n || p == static_cast<int>(v))
          throw PreconditionError("pattern vertex has an invalid parent");
        children_[p].push_back(static_cast<int>(v));
      }
    }
    if (root_ == -1) throw PreconditionError("pattern tree has no root");
    depth_.assign(n, -1);
    depth_[root_] = 0;
    std::vector<int> stack{root_};
    std::size_t seen = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++seen;
      for (int c : children_[u]) {
        depth_[c] = depth_[u] + 1;
        stack.push_back(c);
      }
    }
    if (seen != n) throw PreconditionError("pattern tree contains a cycle");
  }

  std::size_t size() const { return parent_.size(); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  int color(int v) const { return color_[v]; }
  int depth(int v) const { return depth_[v]; }
  const std::vector<int>& parents() const { return parent_; }
  const std::vector<int>& colors() const { return color_; }
  const std::vector<int>& children(int v) const { return children_[v]; }

  int height() const { return *std::max_element(depth_.begin(), depth_.end()); }
  bool is_star() const { return height() <= 1; }

  bool colorful() const {
    std::set<int> s(color_.begin(), color_.end());
    return s.size() == color_.size();
  }

  // Sorted distinct (parent color, child color) pairs.
  std::vector<std::pair<int, int>> edge_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (parent_[v] != -1) out.push_back({color_[parent_[v]], color_[v]});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Removes v and hangs its children onto parent(v).
  PatternTree splice(int v) const {
    if (parent_[v] == -1) throw PreconditionError("cannot splice the pattern root");
    std::vector<int> par, col;
    auto shift = [v](int x) { return x > v ? x - 1 : x; };
    for (std::size_t u = 0; u < size(); ++u) {
      if (static_cast<int>(u) == v) continue;
      int p = parent_[u] == v ? parent_[v] : parent_[u];
      par.push_back(p == -1 ? -1 : shift(p));
      col.push_back(color_[u]);
    }
    return PatternTree(std::move(par), std::move(col));
  }

  // Colorful pattern with the same root color and edge color pairs, if any.
  std::optional<PatternTree> normalized() const {
    if (colorful()) return *this;
    const int rc = color_[root_];
    std::map<int, int> up;
    std::set<int> cols{rc};
    for (auto [a, b] : edge_pairs()) {
      if (a == b || b == rc) return std::nullopt;
      auto [it, fresh] = up.emplace(b, a);
      if (!fresh && it->second != a) return std::nullopt;
      cols.insert(a);
      cols.insert(b);
    }
    for (int c : cols) {
      int x = c;
      for (std::size_t step = 0; x != rc; ++step) {
        auto it = up.find(x);
        if (it == up.end() || step > cols.size()) return std::nullopt;
        x = it->second;
      }
    }
    std::vector<int> order{rc};
    for (int c : cols)
      if (c != rc) order.push_back(c);
    std::map<int, int> idx;
    for (std::size_t i = 0; i < order.size(); ++i) idx[order[i]] = static_cast<int>(i);
    std::vector<int> par(order.size(), -1);
    for (std::size_t i = 1; i < order.size(); ++i) par[i] = idx[up[order[i]]];
    return PatternTree(std::move(par), std::move(order));
  }

  friend bool operator==(const PatternTree& a, const PatternTree& b) {
    return a.parent_ == b.parent_ && a.color_ == b.color_;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> color_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  int root_ = -1;
};

}  // namespace pdd
