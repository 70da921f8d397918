#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/min_cost_flow.hpp"

namespace pdd {

// No vertex other than the root has both a source and a non-source below.
inline bool is_source_separating(const Instance& inst) {
  const PhyloTree& t = inst.tree;
  std::vector<char> src(t.size(), 0), other(t.size(), 0);
  const auto& pre = t.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    VertexId v = *it;
    if (t.taxon(v) != kNoTaxon) (inst.web.is_source(t.taxon(v)) ? src : other)[v] = 1;
    if (v != t.root() && src[v] && other[v]) return false;
    if (v != t.root()) {
      src[t.parent(v)] |= src[v];
      other[t.parent(v)] |= other[v];
    }
  }
  return true;
}

inline bool has_isolated_arcs_only(const FoodWeb& web) {
  for (std::size_t x = 0; x < web.size(); ++x)
    if (web.prey(static_cast<TaxonId>(x)).size() + web.predators(static_cast<TaxonId>(x)).size() > 1) return false;
  return true;
}

struct FlowGadget {
  FlowNetwork net;
  std::vector<std::size_t> leaf_in;  // per taxon: an arc entering its gadget leaf
  std::vector<std::vector<std::size_t>> into;  // per taxon: all arcs entering the leaf
};

// Network for a given number kp of chosen predators: predators hang below
// rho1 with downward tree edges, sources below rho2 = t with reversed ones.
inline FlowGadget build_flow_gadget(const Instance& inst, std::uint64_t k, std::uint64_t kp) {
  const PhyloTree& tree = inst.tree;
  const FoodWeb& web = inst.web;
  const std::size_t V = tree.size();
  FlowGadget g;
  FlowNetwork& net = g.net;
  net.s = net.add_vertex();
  const int nu = net.add_vertex();
  const int rho1 = net.add_vertex();
  const int rho2 = net.add_vertex();
  net.t = rho2;
  // which side each tree vertex belongs to
  std::vector<char> pred_side(V, 0), src_side(V, 0);
  for (std::size_t x = 0; x < inst.n(); ++x) {
    auto& side = web.is_source(static_cast<TaxonId>(x)) ? src_side : pred_side;
    for (VertexId v = tree.leaf(static_cast<TaxonId>(x)); v != tree.root(); v = tree.parent(v)) side[v] = 1;
  }
  std::vector<int> id(V, -1);
  for (VertexId v : tree.preorder()) {
    if (v == tree.root() || (!pred_side[v] && !src_side[v])) continue;
    id[v] = net.add_vertex();
  }
  auto node = [&](VertexId v, bool pred) {
    if (v == tree.root()) return pred ? rho1 : rho2;
    return id[v];
  };
  const std::int64_t K = static_cast<std::int64_t>(k);
  g.into.assign(inst.n(), {});
  for (VertexId v : tree.preorder()) {
    if (v == tree.root() || id[v] < 0) continue;
    const bool pred = pred_side[v];
    const int up = node(tree.parent(v), pred), me = id[v];
    const std::int64_t w = static_cast<std::int64_t>(tree.weight(v));
    if (pred) {
      std::size_t a = net.add_arc(up, me, 1, -w);
      net.add_arc(up, me, std::max<std::int64_t>(K - 1, 0), 0);
      if (tree.taxon(v) != kNoTaxon) g.into[tree.taxon(v)].push_back(a), g.into[tree.taxon(v)].push_back(a + 1);
    } else {
      net.add_arc(me, up, 1, -w);
      net.add_arc(me, up, std::max<std::int64_t>(K - 1, 0), 0);
    }
  }
  net.add_arc(net.s, rho1, static_cast<std::int64_t>(kp), 0);
  net.add_arc(net.s, nu, K - 2 * static_cast<std::int64_t>(kp), 0);
  for (std::size_t x = 0; x < inst.n(); ++x)
    if (web.is_source(static_cast<TaxonId>(x)))
      g.into[x].push_back(net.add_arc(nu, id[tree.leaf(static_cast<TaxonId>(x))], K, 0));
  for (const Arc& a : web.arcs())
    g.into[a.prey].push_back(net.add_arc(id[tree.leaf(a.predator)], id[tree.leaf(a.prey)], 1, 0));
  return g;
}

struct FlowStats {
  std::size_t evaluations = 0;
};

// Best value reachable with exactly kp predators, and its witness.
inline std::optional<Selection> flow_for_kprime(const Instance& inst, std::uint64_t k, std::uint64_t kp) {
  FlowGadget g = build_flow_gadget(inst, k, kp);
  auto r = min_cost_flow(g.net, static_cast<std::int64_t>(k - kp));
  if (!r) return std::nullopt;
  TaxonSet S(inst.n());
  for (std::size_t x = 0; x < inst.n(); ++x)
    for (std::size_t a : g.into[x])
      if (r->flow[a] > 0) S.set(x);
  return Selection{S, static_cast<Weight>(-r->cost)};
}

inline std::optional<Selection> max_pd_source_separating(const Instance& inst, const SolveOptions& opt = {},
                                                         FlowStats* stats = nullptr) {
  if (!has_isolated_arcs_only(inst.web)) throw PreconditionError("the flow solver needs a food web of isolated arcs");
  if (!is_source_separating(inst)) throw PreconditionError("the instance is not source-separating");
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, inst.n());
  if (k == 0) return Selection{TaxonSet(inst.n()), 0};
  const std::uint64_t hi = std::min<std::uint64_t>(k / 2, inst.web.num_arcs());
  const std::uint64_t arcs = inst.tree.size() * 2 + inst.n() * 2 + 4;
  const std::uint64_t work = detail::sat_mul(detail::sat_mul(k, arcs), hi + 1);
  if (work > opt.budget) throw BudgetExceeded("flow search needs about " + std::to_string(work) + " steps");
  std::map<std::uint64_t, std::optional<Selection>> memo;
  auto eval = [&](std::uint64_t kp) -> const std::optional<Selection>& {
    auto it = memo.find(kp);
    if (it != memo.end()) return it->second;
    if (stats) ++stats->evaluations;
    return memo.emplace(kp, flow_for_kprime(inst, k, kp)).first->second;
  };
  auto val = [&](std::uint64_t kp) -> std::int64_t {
    const auto& r = eval(kp);
    return r ? static_cast<std::int64_t>(r->value) : -1;
  };
  std::uint64_t best = 0;
  if (hi <= 8) {
    for (std::uint64_t kp = 0; kp <= hi; ++kp)
      if (val(kp) > val(best)) best = kp;
  } else {
    // the optimum over kp is concave, so follow the slope
    std::uint64_t lo = 0, up = hi;
    while (lo < up) {
      const std::uint64_t mid = lo + (up - lo) / 2;
      if (val(mid) >= val(mid + 1)) up = mid;
      else lo = mid + 1;
    }
    best = lo;
  }
  return eval(best);
}

// Exhaustive over kp; reference for the slope search.
inline std::optional<Selection> max_pd_source_separating_exhaustive(const Instance& inst) {
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, inst.n());
  std::optional<Selection> best;
  for (std::uint64_t kp = 0; kp <= std::min<std::uint64_t>(k / 2, inst.web.num_arcs()); ++kp) {
    auto r = flow_for_kprime(inst, k, kp);
    if (r && (!best || r->value > best->value)) best = r;
  }
  return best;
}

inline Answer solve_pdd_source_separating_flow(const Instance& inst, const SolveOptions& opt = {}) {
  auto best = max_pd_source_separating(inst, opt);
  if (!best || best->value < inst.D) return std::nullopt;
  if (!is_solution(inst, best->S)) throw std::logic_error("flow solver produced an invalid witness");
  return make_solution(inst, best->S);
}

}  // namespace pdd
