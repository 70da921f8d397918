#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdd/core.hpp"
#include "pdd/structural/common.hpp"
#include "pdd/structural/tree_decomposition.hpp"

namespace pdd {

// Bag colors: black = not chosen, red = chosen and still needs prey,
// green = chosen and fed (a source, or a chosen prey).
enum class BagColor : int { black = 0, red = 1, green = 2 };

// Color of a bag vertex after a join, for every pair of child colors.
inline BagColor join_color(BagColor a, BagColor b) {
  if (a == BagColor::green || b == BagColor::green) return BagColor::green;
  if (a == BagColor::red || b == BagColor::red) return BagColor::red;
  return BagColor::black;
}

class TreewidthDP {
 public:
  TreewidthDP(const Instance& inst, const NiceTreeDecomposition& nice)
      : inst_(inst), nice_(nice), w_(detail::star_weights(inst.tree)) {
    detail::require_star(inst, "the treewidth solver");
    std::string err = validate_decomposition(nice, inst.web.underlying_adjacency());
    if (!err.empty()) throw PreconditionError("invalid tree decomposition: " + err);
    k_ = static_cast<std::size_t>(std::min<std::uint64_t>(inst.k, inst.n()));
    const std::size_t N = nice.size();
    tables_.resize(N);
    cap_.assign(N, 0);
    vt_.assign(N, 0);
    for (int t : nice.postorder()) compute(t);
  }

  std::size_t cap(int t) const { return cap_[t]; }

  static std::size_t encode(const std::vector<BagColor>& colors) {
    std::size_t c = 0;
    for (std::size_t i = colors.size(); i-- > 0;) c = c * 3 + static_cast<std::size_t>(colors[i]);
    return c;
  }
  static std::vector<BagColor> decode(std::size_t c, std::size_t len) {
    std::vector<BagColor> out(len);
    for (std::size_t i = 0; i < len; ++i, c /= 3) out[i] = static_cast<BagColor>(c % 3);
    return out;
  }

  // Best diversity of a chosen set Y ⊆ V_t of size s whose bag vertices have
  // the given colors and whose forgotten members are all fed.
  std::int64_t value(int t, const std::vector<BagColor>& colors, std::size_t s) const {
    if (colors.size() != nice_.nodes[t].bag.size()) throw DomainError("coloring does not match the bag");
    return at(t, encode(colors), s);
  }

  std::optional<Selection> best() const {
    const int r = nice_.root;
    std::int64_t v = detail::kMinusInf;
    std::size_t bs = 0;
    for (std::size_t s = 0; s <= cap_[r]; ++s)
      if (at(r, 0, s) > v) {
        v = at(r, 0, s);
        bs = s;
      }
    if (v == detail::kMinusInf) return std::nullopt;
    return Selection{witness(r, 0, bs), static_cast<Weight>(v)};
  }

 private:
  using Kind = NiceTreeDecomposition::Kind;

  std::int64_t at(int t, std::size_t c, std::size_t s) const {
    if (s > cap_[t]) return detail::kMinusInf;
    return tables_[t][c * (cap_[t] + 1) + s];
  }

  static std::size_t pos(const std::vector<TaxonId>& bag, TaxonId v) {
    return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  }

  // Coloring of `to` (a subset or superset of `from`'s bag) sharing colors.
  static std::size_t project(const std::vector<BagColor>& colors, const std::vector<TaxonId>& from,
                             const std::vector<TaxonId>& to, TaxonId extra, BagColor extra_color) {
    std::size_t c = 0;
    for (std::size_t i = to.size(); i-- > 0;) {
      BagColor col = to[i] == extra ? extra_color : colors[pos(from, to[i])];
      c = c * 3 + static_cast<std::size_t>(col);
    }
    return c;
  }

  // Child coloring for an introduce entry with v chosen: v dropped, the
  // predators in `flip` turned red.
  std::size_t introduce_child(const std::vector<BagColor>& colors, const std::vector<TaxonId>& bag,
                              const std::vector<TaxonId>& cbag, const std::vector<TaxonId>& flip) const {
    std::vector<BagColor> cc(cbag.size());
    for (std::size_t i = 0; i < cbag.size(); ++i) cc[i] = colors[pos(bag, cbag[i])];
    for (TaxonId u : flip) cc[pos(cbag, u)] = BagColor::red;
    return encode(cc);
  }

  // Green predators of v in the bag whose state allows v to be chosen; none
  // of v's predators may be red once v is chosen.
  bool introduce_ok(const std::vector<BagColor>& colors, const std::vector<TaxonId>& bag, TaxonId v,
                    std::vector<TaxonId>& green_preds) const {
    const FoodWeb& web = inst_.web;
    const BagColor cv = colors[pos(bag, v)];
    green_preds.clear();
    for (TaxonId u : web.predators(v)) {
      auto it = std::lower_bound(bag.begin(), bag.end(), u);
      if (it == bag.end() || *it != u) continue;
      BagColor cu = colors[it - bag.begin()];
      if (cu == BagColor::red) return false;
      if (cu == BagColor::green) green_preds.push_back(u);
    }
    bool fed = web.is_source(v);
    for (TaxonId p : web.prey(v)) {
      auto it = std::lower_bound(bag.begin(), bag.end(), p);
      if (it != bag.end() && *it == p && colors[it - bag.begin()] != BagColor::black) fed = true;
    }
    return cv == BagColor::green ? fed : !fed;
  }

  void compute(int t) {
    const auto& nd = nice_.nodes[t];
    const std::size_t b = nd.bag.size();
    const std::size_t C = detail::pow3(b);
    switch (nd.kind) {
      case Kind::leaf: vt_[t] = 0; break;
      case Kind::introduce: vt_[t] = vt_[nd.children[0]] + 1; break;
      case Kind::forget: vt_[t] = vt_[nd.children[0]]; break;
      case Kind::join: vt_[t] = vt_[nd.children[0]] + vt_[nd.children[1]] - b; break;
    }
    cap_[t] = std::min(k_, vt_[t]);
    const std::size_t S = cap_[t] + 1;
    auto& T = tables_[t];
    T.assign(C * S, detail::kMinusInf);
    switch (nd.kind) {
      case Kind::leaf:
        T[0] = 0;
        break;
      case Kind::introduce: {
        const int ch = nd.children[0];
        const auto& cbag = nice_.nodes[ch].bag;
        const TaxonId v = nd.vertex;
        const std::int64_t wv = static_cast<std::int64_t>(w_[v]);
        std::vector<TaxonId> gp, flip;
        for (std::size_t c = 0; c < C; ++c) {
          auto colors = decode(c, b);
          if (colors[pos(nd.bag, v)] == BagColor::black) {
            const std::size_t cc = introduce_child(colors, nd.bag, cbag, {});
            for (std::size_t s = 0; s < S; ++s) T[c * S + s] = at(ch, cc, s);
            continue;
          }
          if (!introduce_ok(colors, nd.bag, v, gp)) continue;
          for (std::size_t A = 0; A < (std::size_t{1} << gp.size()); ++A) {
            flip.clear();
            for (std::size_t i = 0; i < gp.size(); ++i)
              if (A >> i & 1) flip.push_back(gp[i]);
            const std::size_t cc = introduce_child(colors, nd.bag, cbag, flip);
            for (std::size_t s = 1; s < S; ++s) {
              const std::int64_t x = at(ch, cc, s - 1);
              if (x != detail::kMinusInf) T[c * S + s] = std::max(T[c * S + s], x + wv);
            }
          }
        }
        break;
      }
      case Kind::forget: {
        const int ch = nd.children[0];
        const auto& cbag = nice_.nodes[ch].bag;
        for (std::size_t c = 0; c < C; ++c) {
          auto colors = decode(c, b);
          const std::size_t g = project(colors, nd.bag, cbag, nd.vertex, BagColor::green);
          const std::size_t k0 = project(colors, nd.bag, cbag, nd.vertex, BagColor::black);
          for (std::size_t s = 0; s < S; ++s) T[c * S + s] = std::max(at(ch, g, s), at(ch, k0, s));
        }
        break;
      }
      case Kind::join: {
        const int t1 = nd.children[0], t2 = nd.children[1];
        for_each_join_pair(b, [&](std::size_t c, std::size_t c1, std::size_t c2, std::size_t chosen, std::int64_t wsum) {
          for (std::size_t s1 = chosen; s1 <= cap_[t1]; ++s1) {
            const std::int64_t x = at(t1, c1, s1);
            if (x == detail::kMinusInf) continue;
            for (std::size_t s2 = chosen; s2 <= cap_[t2] && s1 + s2 - chosen < S; ++s2) {
              const std::int64_t y = at(t2, c2, s2);
              if (y == detail::kMinusInf) continue;
              auto& cell = T[c * S + s1 + s2 - chosen];
              cell = std::max(cell, x + y - wsum);
            }
          }
        }, nd.bag);
        break;
      }
    }
  }

  // Pairs of child colorings agreeing on black, with their combined coloring.
  template <class F>
  void for_each_join_pair(std::size_t b, const F& f, const std::vector<TaxonId>& bag) const {
    static constexpr int kPairs[5][3] = {{0, 0, 0}, {1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {2, 2, 2}};
    std::vector<int> digit(b, 0);
    while (true) {
      std::size_t c = 0, c1 = 0, c2 = 0, chosen = 0;
      std::int64_t wsum = 0;
      for (std::size_t i = b; i-- > 0;) {
        const auto& p = kPairs[digit[i]];
        c1 = c1 * 3 + p[0];
        c2 = c2 * 3 + p[1];
        c = c * 3 + p[2];
        if (digit[i] != 0) {
          ++chosen;
          wsum += static_cast<std::int64_t>(w_[bag[i]]);
        }
      }
      f(c, c1, c2, chosen, wsum);
      std::size_t i = 0;
      while (i < b && ++digit[i] == 5) digit[i++] = 0;
      if (i == b) break;
    }
  }

  TaxonSet witness(int root, std::size_t root_c, std::size_t root_s) const {
    TaxonSet S(inst_.n());
    struct Job {
      int t;
      std::size_t c, s;
    };
    std::vector<Job> todo{{root, root_c, root_s}};
    while (!todo.empty()) {
      Job j = todo.back();
      todo.pop_back();
      const auto& nd = nice_.nodes[j.t];
      const std::int64_t want = at(j.t, j.c, j.s);
      auto colors = decode(j.c, nd.bag.size());
      switch (nd.kind) {
        case Kind::leaf:
          break;
        case Kind::introduce: {
          const int ch = nd.children[0];
          const auto& cbag = nice_.nodes[ch].bag;
          const TaxonId v = nd.vertex;
          if (colors[pos(nd.bag, v)] == BagColor::black) {
            todo.push_back({ch, introduce_child(colors, nd.bag, cbag, {}), j.s});
            break;
          }
          S.set(v);
          std::vector<TaxonId> gp, flip;
          introduce_ok(colors, nd.bag, v, gp);
          bool found = false;
          for (std::size_t A = 0; A < (std::size_t{1} << gp.size()) && !found; ++A) {
            flip.clear();
            for (std::size_t i = 0; i < gp.size(); ++i)
              if (A >> i & 1) flip.push_back(gp[i]);
            const std::size_t cc = introduce_child(colors, nd.bag, cbag, flip);
            const std::int64_t x = at(ch, cc, j.s - 1);
            if (x != detail::kMinusInf && x + static_cast<std::int64_t>(w_[v]) == want) {
              todo.push_back({ch, cc, j.s - 1});
              found = true;
            }
          }
          if (!found) throw std::logic_error("treewidth witness recovery failed");
          break;
        }
        case Kind::forget: {
          const int ch = nd.children[0];
          const auto& cbag = nice_.nodes[ch].bag;
          const std::size_t g = project(colors, nd.bag, cbag, nd.vertex, BagColor::green);
          const std::size_t k0 = project(colors, nd.bag, cbag, nd.vertex, BagColor::black);
          todo.push_back({ch, at(ch, g, j.s) == want ? g : k0, j.s});
          break;
        }
        case Kind::join: {
          const int t1 = nd.children[0], t2 = nd.children[1];
          bool found = false;
          for_each_join_pair(nd.bag.size(), [&](std::size_t c, std::size_t c1, std::size_t c2, std::size_t chosen,
                                                std::int64_t wsum) {
            if (found || c != j.c) return;
            for (std::size_t s1 = chosen; s1 <= cap_[t1] && !found; ++s1) {
              if (j.s + chosen < s1) break;
              const std::size_t s2 = j.s + chosen - s1;
              const std::int64_t x = at(t1, c1, s1), y = at(t2, c2, s2);
              if (x != detail::kMinusInf && y != detail::kMinusInf && x + y - wsum == want) {
                todo.push_back({t1, c1, s1});
                todo.push_back({t2, c2, s2});
                found = true;
              }
            }
          }, nd.bag);
          if (!found) throw std::logic_error("treewidth witness recovery failed");
          break;
        }
      }
    }
    return S;
  }

  const Instance& inst_;
  const NiceTreeDecomposition& nice_;
  std::vector<Weight> w_;
  std::size_t k_ = 0;
  std::vector<std::vector<std::int64_t>> tables_;
  std::vector<std::size_t> cap_, vt_;
};

inline std::optional<Selection> max_pd_by_treewidth(const Instance& inst, const NiceTreeDecomposition& nice,
                                                    const SolveOptions& opt = {}) {
  detail::require_star(inst, "the treewidth solver");
  const std::size_t w = static_cast<std::size_t>(std::max(0, nice.width()));
  const std::uint64_t k = std::min<std::uint64_t>(inst.k, inst.n()) + 1;
  const std::uint64_t work = detail::sat_mul(detail::sat_mul(detail::pow3(2 * (w + 1)), nice.size()), k);
  if (work > opt.budget) throw BudgetExceeded("treewidth DP needs about " + std::to_string(work) + " steps");
  return TreewidthDP(inst, nice).best();
}

inline Answer solve_spdd_by_treewidth(const Instance& inst, const NiceTreeDecomposition& nice,
                                      const SolveOptions& opt = {}) {
  auto best = max_pd_by_treewidth(inst, nice, opt);
  if (!best || best->value < inst.D) return std::nullopt;
  if (!is_solution(inst, best->S)) throw std::logic_error("treewidth solver produced an invalid witness");
  return make_solution(inst, best->S);
}

}  // namespace pdd
