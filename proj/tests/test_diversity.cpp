#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "pdd/diversity.hpp"
#include "pdd/generators.hpp"
#include "support.hpp"

using namespace pdd;
using namespace pdd::testing;

namespace {

// Single-source instance: the transform's new source gets a unit edge.
Instance single_source(const Instance& base) {
  SourceTransform st = single_source_transform(base);
  const PhyloTree& t = st.instance.tree;
  std::vector<Weight> w = t.weights();
  w[t.leaf(st.star)] = 1;
  Instance out = st.instance;
  out.tree = PhyloTree(t.parents(), w, t.taxa(), t.num_taxa(), PhyloTree::Arity::relaxed, t.labels());
  return out;
}

// Colors covered by x: blocks of f over the root path, recomputed from the
// edge list by walking parents.
std::uint64_t ref_cover(const PhyloTree& t, const std::vector<int>& f, TaxonId x) {
  std::vector<Weight> start(t.size(), 0);
  Weight acc = 0;
  for (VertexId v : t.preorder())
    if (v != t.root()) {
      start[v] = acc;
      acc += t.weight(v);
    }
  std::uint64_t m = 0;
  for (VertexId v = t.leaf(x); v != t.root(); v = t.parent(v))
    for (Weight i = 0; i < t.weight(v); ++i) m |= std::uint64_t{1} << (f[start[v] + i] - 1);
  return m;
}

bool ref_colored_yes(const Instance& inst, const std::vector<int>& f, const std::vector<int>& g, std::size_t D) {
  const std::size_t n = inst.n();
  const std::uint64_t need = (std::uint64_t{1} << D) - 1;
  for (std::uint64_t m : subset_masks(n)) {
    if (m == 0 || !ref_viable(inst.web, m)) continue;
    std::uint64_t cov = 0, hat = 0;
    bool colorful = true;
    for (std::size_t x = 0; x < n; ++x)
      if (m >> x & 1) {
        cov |= ref_cover(inst.tree, f, static_cast<TaxonId>(x));
        std::uint64_t b = std::uint64_t{1} << (g[x] - 1);
        if (hat & b) colorful = false;
        hat |= b;
      }
    if (colorful && (cov & need) == need) return true;
  }
  return false;
}

}  // namespace

TEST(EdgeColors, PrefixBlocks) {
  Instance inst = make("(a:2,b:1)r;", "", 2, 2);
  EdgeColorAssignment a = build_edge_color_assignment(inst.tree, 2, 2, {2, 1, 2}, {1, 2});
  EXPECT_EQ(a.prefix, (std::vector<Weight>{0, 2, 3}));
  EXPECT_EQ(a.W, 3u);
  VertexId ea = inst.tree.leaf(inst.id_of("a")), eb = inst.tree.leaf(inst.id_of("b"));
  EXPECT_EQ(a.edge_colors[ea], color_bit(1) | color_bit(2));
  EXPECT_EQ(a.edge_colors[eb], color_bit(2));
  EXPECT_EQ(a.hat, (std::vector<int>{1, 2}));
  EXPECT_THROW(build_edge_color_assignment(inst.tree, 2, 2, {1, 1}, {1, 2}), PreconditionError);
  EXPECT_THROW(build_edge_color_assignment(inst.tree, 2, 2, {1, 3, 1}, {1, 2}), PreconditionError);
}

TEST(EdgeColors, IdentityGivesDisjointBlocksAndPD) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::RandomParams p;
    p.n = 2 + seed % 6;
    p.seed = seed;
    p.max_weight = 3;
    p.tree = static_cast<gen::TreeShape>(seed % 4);
    Instance inst = gen::gen_random(p);
    const std::size_t W = inst.tree.total_weight();
    if (W > 64) continue;
    std::vector<int> f(W);
    std::iota(f.begin(), f.end(), 1);
    std::vector<int> g(inst.n(), 1);
    EdgeColorAssignment a = build_edge_color_assignment(inst.tree, W, 1, f, g);
    ColorMask seen = 0;
    for (std::size_t j = 0; j < a.edges.size(); ++j) {
      ColorMask c = a.edge_colors[a.edges[j]];
      ASSERT_EQ(static_cast<Weight>(__builtin_popcountll(c)), inst.tree.weight(a.edges[j]));
      ASSERT_EQ(c & seen, 0u);
      seen |= c;
      ASSERT_EQ(a.prefix[j + 1] - a.prefix[j], inst.tree.weight(a.edges[j]));
    }
    for (std::size_t x = 0; x < inst.n(); ++x)
      ASSERT_EQ(static_cast<Weight>(__builtin_popcountll(a.taxon_colors[x])),
                ref_pd(inst.tree, std::uint64_t{1} << x));
  }
}

TEST(DColored, Preconditions) {
  Instance inst = instance_a(2, 8);
  EdgeColorAssignment a = build_edge_color_assignment(inst.tree, 8, 2, std::vector<int>(10, 1), {1, 2, 1});
  EXPECT_THROW(solve_d_colored_pdd(inst, a), PreconditionError);  // two sources
  Instance one = single_source(inst);
  EXPECT_THROW(solve_d_colored_pdd(one, a), PreconditionError);  // assignment misses the new source
  one.D = 5;
  EXPECT_THROW(solve_d_colored_pdd(one, a), PreconditionError);  // heavy edge
}

TEST(DColored, AgreesWithColoredBruteForce) {
  std::mt19937_64 rng(11);
  std::size_t yes = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    gen::RandomParams p;
    p.n = 2 + seed % 5;
    p.seed = seed;
    p.max_weight = 3;
    p.tree = static_cast<gen::TreeShape>(seed % 4);
    Instance inst = single_source(gen::gen_random(p));
    const Weight W = inst.tree.total_weight();
    const Weight lo = inst.tree.max_weight() + 1;
    if (lo > W || W > 20) continue;
    inst.D = lo + rng() % (W - lo + 1);
    const std::size_t D = inst.D;
    const std::size_t k = 1 + rng() % inst.n();
    std::vector<int> f(W), g(inst.n());
    for (auto& c : f) c = 1 + static_cast<int>(rng() % D);
    for (auto& c : g) c = 1 + static_cast<int>(rng() % k);
    EdgeColorAssignment a = build_edge_color_assignment(inst.tree, D, k, f, g);
    Answer ans = solve_d_colored_pdd(inst, a);
    ASSERT_EQ(ans.has_value(), ref_colored_yes(inst, f, g, D)) << "seed " << seed;
    ++total;
    if (ans) {
      ++yes;
      std::uint64_t cov = 0, hat = 0;
      for_each_member(ans->taxa, [&](TaxonId x) {
        cov |= ref_cover(inst.tree, f, x);
        ASSERT_FALSE(hat >> (g[x] - 1) & 1);
        hat |= std::uint64_t{1} << (g[x] - 1);
      });
      EXPECT_EQ(cov & ((std::uint64_t{1} << D) - 1), (std::uint64_t{1} << D) - 1);
      EXPECT_TRUE(is_viable(inst.web, ans->taxa));
    }
  }
  EXPECT_GT(total, 100u);
  EXPECT_GT(yes, 10u);
  EXPECT_LT(yes, total);
}

TEST(DColored, InjectiveColoringsReproduceBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::RandomParams p;
    p.n = 2 + seed % 5;
    p.seed = 300 + seed;
    p.max_weight = 3;
    Instance inst = single_source(gen::gen_random(p));
    const Weight W = inst.tree.total_weight();
    if (W > 40 || inst.tree.max_weight() >= W) continue;
    inst.D = W;
    inst.k = inst.n();
    std::vector<int> f(W), g(inst.n());
    std::iota(f.begin(), f.end(), 1);
    std::iota(g.begin(), g.end(), 1);
    Answer ans = solve_d_colored_pdd(inst, build_edge_color_assignment(inst.tree, W, inst.n(), f, g));
    ASSERT_EQ(ans.has_value(), ref_decide(inst)) << seed;
  }
}

TEST(DDriver, Examples) {
  Answer a = solve_pdd_by_d(instance_a(2, 8));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->taxa, instance_a().set_of({"a", "b"}));
  EXPECT_FALSE(solve_pdd_by_d(instance_a(2, 9)));
  EXPECT_FALSE(solve_pdd_by_d(instance_a(3, 11)));
  Answer heavy = solve_pdd_by_d(instance_a(2, 3));
  ASSERT_TRUE(heavy);
  EXPECT_TRUE(ref_is_solution(instance_a(2, 3), heavy->taxa));
  Answer zero = solve_pdd_by_d(instance_a(0, 0));
  ASSERT_TRUE(zero);
  EXPECT_EQ(zero->taxa.count(), 0u);
}

TEST(DDriver, AgreesWithOracle) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; checked < 150 && seed < 2000; ++seed) {
    gen::RandomParams p;
    p.n = 2 + seed % 7;
    p.seed = 700 + seed;
    p.max_weight = 3;
    p.tree = static_cast<gen::TreeShape>(seed % 4);
    p.web = static_cast<gen::WebShape>(seed % 7);
    p.d_fraction = 0.4 + 0.1 * static_cast<double>(seed % 6);
    Instance inst = gen::gen_random(p);
    if (inst.tree.total_weight() > 14) continue;
    inst.k = std::min<std::uint64_t>(inst.k, 4);
    ++checked;
    Answer a = solve_pdd_by_d(inst);
    ASSERT_EQ(a.has_value(), ref_decide(inst)) << "seed " << seed;
    if (a) {
      ASSERT_TRUE(ref_is_solution(inst, a->taxa));
    }
  }
  EXPECT_EQ(checked, 150u);
}

TEST(DDriver, MonteCarloHasNoFalsePositives) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::RandomParams p;
    p.n = 3 + seed % 5;
    p.seed = 1300 + seed;
    p.max_weight = 3;
    Instance inst = gen::gen_random(p);
    inst.D = std::min<Weight>(inst.D, 4);
    inst.k = std::min<std::uint64_t>(inst.k, 2);
    SolveOptions opt;
    opt.mode = Mode::monte_carlo;
    opt.seed = seed;
    Answer a = solve_pdd_by_d(inst, opt);
    if (a) {
      ASSERT_TRUE(ref_is_solution(inst, a->taxa));
    }
  }
}

TEST(DDriver, BudgetRefusal) {
  Instance inst = instance_a(2, 7);
  SolveOptions opt;
  opt.budget = 10;
  EXPECT_THROW(solve_pdd_by_d(inst, opt), BudgetExceeded);
}
