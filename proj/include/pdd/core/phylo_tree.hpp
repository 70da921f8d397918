#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "pdd/core/errors.hpp"
#include "pdd/core/taxon_set.hpp"

namespace pdd {

// Rooted tree with positive integer edge weights. Every leaf carries exactly
// one taxon and every taxon labels exactly one leaf. The weight of a vertex
// is the weight of the edge from its parent.
class PhyloTree {
 public:
  enum class Arity { strict, relaxed };

  PhyloTree() : PhyloTree({kNoVertex}, {0}, {kNoTaxon}, 0, Arity::relaxed) {}

  PhyloTree(std::vector<VertexId> parent, std::vector<Weight> weight, std::vector<TaxonId> taxon,
            std::size_t num_taxa, Arity arity = Arity::strict, std::vector<std::string> labels = {})
      : parent_(std::move(parent)),
        weight_(std::move(weight)),
        taxon_(std::move(taxon)),
        labels_(std::move(labels)),
        num_taxa_(num_taxa),
        arity_(arity) {
    validate_and_index();
  }

  std::size_t size() const { return parent_.size(); }
  std::size_t num_taxa() const { return num_taxa_; }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  Weight weight(VertexId v) const { return weight_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  TaxonId taxon(VertexId v) const { return taxon_[v]; }
  VertexId leaf(TaxonId x) const {
    if (x < 0 || static_cast<std::size_t>(x) >= num_taxa_)
      throw DomainError("unknown taxon id " + std::to_string(x));
    return leaf_[x];
  }
  bool is_leaf(VertexId v) const { return children_[v].empty(); }
  const std::string& label(VertexId v) const {
    static const std::string empty;
    return labels_.empty() ? empty : labels_[v];
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<VertexId>& parents() const { return parent_; }
  const std::vector<Weight>& weights() const { return weight_; }
  const std::vector<TaxonId>& taxa() const { return taxon_; }
  Arity arity() const { return arity_; }

  const std::vector<VertexId>& preorder() const { return preorder_; }
  int depth(VertexId v) const { return depth_[v]; }
  int height() const { return height_; }
  Weight max_weight() const { return max_weight_; }
  Weight total_weight() const { return total_weight_; }

  bool is_star() const {
    for (VertexId c : children_[root_])
      if (!children_[c].empty()) return false;
    return true;
  }

  TaxonSet offspring(VertexId v) const {
    TaxonSet s(num_taxa_);
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      if (taxon_[u] != kNoTaxon) s.set(taxon_[u]);
      for (VertexId c : children_[u]) stack.push_back(c);
    }
    return s;
  }

  std::vector<VertexId> descendants(VertexId v) const {
    std::vector<VertexId> out;
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      out.push_back(u);
      for (VertexId c : children_[u]) stack.push_back(c);
    }
    return out;
  }

  friend bool operator==(const PhyloTree& a, const PhyloTree& b) {
    return a.parent_ == b.parent_ && a.weight_ == b.weight_ && a.taxon_ == b.taxon_ &&
           a.num_taxa_ == b.num_taxa_;
  }

 private:
  void validate_and_index() {
    const std::size_t V = parent_.size();
    if (V == 0) throw PreconditionError("tree has no vertices");
    if (weight_.size() != V || taxon_.size() != V)
      throw PreconditionError("tree arrays have inconsistent lengths");
    if (!labels_.empty() && labels_.size() != V)
      throw PreconditionError("tree label array has wrong length");
    children_.assign(V, {});
    root_ = kNoVertex;
    for (std::size_t v = 0; v < V; ++v) {
      VertexId p = parent_[v];
      if (p == kNoVertex) {
        if (root_ != kNoVertex) throw PreconditionError("tree has more than one root");
        root_ = static_cast<VertexId>(v);
        weight_[v] = 0;
        continue;
      }
      if (p < 0 || static_cast<std::size_t>(p) >= V || p == static_cast<VertexId>(v))
        throw PreconditionError("vertex " + std::to_string(v) + " has an invalid parent");
      if (weight_[v] == 0)
        throw PreconditionError("edge into vertex " + std::to_string(v) + " has weight 0");
      children_[p].push_back(static_cast<VertexId>(v));
    }
    if (root_ == kNoVertex) throw PreconditionError("tree has no root");

    depth_.assign(V, -1);
    preorder_.clear();
    preorder_.reserve(V);
    std::vector<VertexId> stack{root_};
    depth_[root_] = 0;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      preorder_.push_back(u);
      const auto& ch = children_[u];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
        depth_[*it] = depth_[u] + 1;
        stack.push_back(*it);
      }
    }
    if (preorder_.size() != V) throw PreconditionError("tree contains a cycle or is disconnected");

    leaf_.assign(num_taxa_, kNoVertex);
    height_ = 0;
    max_weight_ = 0;
    total_weight_ = 0;
    for (std::size_t v = 0; v < V; ++v) {
      TaxonId x = taxon_[v];
      bool leaf = children_[v].empty();
      if (leaf) {
        if (x == kNoTaxon) {
          if (!(V == 1 && num_taxa_ == 0))
            throw PreconditionError("leaf vertex " + std::to_string(v) + " carries no taxon");
        } else {
          if (x < 0 || static_cast<std::size_t>(x) >= num_taxa_)
            throw PreconditionError("leaf vertex " + std::to_string(v) + " has an invalid taxon id");
          if (leaf_[x] != kNoVertex)
            throw PreconditionError("taxon " + std::to_string(x) + " labels two leaves");
          leaf_[x] = static_cast<VertexId>(v);
        }
      } else {
        if (x != kNoTaxon)
          throw PreconditionError("internal vertex " + std::to_string(v) + " carries a taxon");
        if (arity_ == Arity::strict && children_[v].size() < 2 &&
            !(static_cast<VertexId>(v) == root_ && num_taxa_ == 1))
          throw PreconditionError("internal vertex " + std::to_string(v) +
                                  " has out-degree 1");
      }
      height_ = std::max(height_, depth_[v]);
      if (static_cast<VertexId>(v) != root_) {
        max_weight_ = std::max(max_weight_, weight_[v]);
        total_weight_ = checked_add(total_weight_, weight_[v]);
      }
    }
    for (std::size_t x = 0; x < num_taxa_; ++x)
      if (leaf_[x] == kNoVertex)
        throw PreconditionError("taxon " + std::to_string(x) + " labels no leaf");
  }

  std::vector<VertexId> parent_;
  std::vector<Weight> weight_;
  std::vector<TaxonId> taxon_;
  std::vector<std::string> labels_;
  std::size_t num_taxa_ = 0;
  Arity arity_ = Arity::strict;

  VertexId root_ = kNoVertex;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> leaf_;
  std::vector<VertexId> preorder_;
  std::vector<int> depth_;
  int height_ = 0;
  Weight max_weight_ = 0;
  Weight total_weight_ = 0;
};

// Mutable copy of a tree used by reduction rules. Vertices are only marked
// dead; build() compacts and drops vertices left without any taxon below.
class TreeEditor {
 public:
  explicit TreeEditor(const PhyloTree& t)
      : parent_(t.parents()),
        weight_(t.weights()),
        taxon_(t.taxa()),
        labels_(t.labels()),
        alive_(t.size(), 1),
        root_(t.root()) {
    if (labels_.empty()) labels_.assign(t.size(), "");
  }

  std::size_t size() const { return parent_.size(); }
  VertexId root() const { return root_; }
  bool alive(VertexId v) const { return alive_[v] != 0; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  Weight weight(VertexId v) const { return weight_[v]; }
  TaxonId taxon(VertexId v) const { return taxon_[v]; }

  std::vector<VertexId> children(VertexId v) const {
    std::vector<VertexId> out;
    for (std::size_t u = 0; u < parent_.size(); ++u)
      if (alive_[u] && parent_[u] == v) out.push_back(static_cast<VertexId>(u));
    return out;
  }

  void kill(VertexId v) { alive_[v] = 0; }

  void remove_subtree(VertexId v) {
    std::vector<std::vector<VertexId>> ch(parent_.size());
    for (std::size_t u = 0; u < parent_.size(); ++u)
      if (alive_[u] && parent_[u] != kNoVertex) ch[parent_[u]].push_back(static_cast<VertexId>(u));
    std::vector<VertexId> stack{v};
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      alive_[u] = 0;
      for (VertexId c : ch[u]) stack.push_back(c);
    }
  }

  void rehang(VertexId v, VertexId new_parent, Weight w) {
    parent_[v] = new_parent;
    weight_[v] = w;
  }

  VertexId add_vertex(VertexId parent, Weight w, TaxonId taxon, std::string label = "") {
    parent_.push_back(parent);
    weight_.push_back(w);
    taxon_.push_back(taxon);
    labels_.push_back(std::move(label));
    alive_.push_back(1);
    return static_cast<VertexId>(parent_.size() - 1);
  }

  struct Built {
    PhyloTree tree;
    std::vector<VertexId> old_to_new;
    std::vector<VertexId> new_to_old;
  };

  // taxon_map[old taxon] = new taxon id or kNoTaxon to drop the leaf.
  Built build(std::size_t num_taxa, const std::vector<TaxonId>& taxon_map,
              PhyloTree::Arity arity = PhyloTree::Arity::relaxed) const {
    const std::size_t V = parent_.size();
    std::vector<char> keep(V, 0);
    for (std::size_t v = 0; v < V; ++v) {
      if (!alive_[v] || taxon_[v] == kNoTaxon || taxon_map[taxon_[v]] == kNoTaxon) continue;
      VertexId u = static_cast<VertexId>(v);
      while (u != kNoVertex && !keep[u]) {
        if (!alive_[u]) throw PreconditionError("live leaf below a removed vertex");
        keep[u] = 1;
        u = parent_[u];
      }
    }
    keep[root_] = 1;
    Built out{PhyloTree(), std::vector<VertexId>(V, kNoVertex), {}};
    for (std::size_t v = 0; v < V; ++v)
      if (keep[v]) {
        out.old_to_new[v] = static_cast<VertexId>(out.new_to_old.size());
        out.new_to_old.push_back(static_cast<VertexId>(v));
      }
    const std::size_t W = out.new_to_old.size();
    std::vector<VertexId> par(W);
    std::vector<Weight> w(W);
    std::vector<TaxonId> tx(W);
    std::vector<std::string> lab(W);
    for (std::size_t i = 0; i < W; ++i) {
      VertexId v = out.new_to_old[i];
      par[i] = v == root_ ? kNoVertex : out.old_to_new[parent_[v]];
      w[i] = v == root_ ? 0 : weight_[v];
      tx[i] = taxon_[v] == kNoTaxon ? kNoTaxon : taxon_map[taxon_[v]];
      lab[i] = labels_[v];
    }
    out.tree = PhyloTree(std::move(par), std::move(w), std::move(tx), num_taxa, arity, std::move(lab));
    return out;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<Weight> weight_;
  std::vector<TaxonId> taxon_;
  std::vector<std::string> labels_;
  std::vector<char> alive_;
  VertexId root_;
};

}  // namespace pdd
