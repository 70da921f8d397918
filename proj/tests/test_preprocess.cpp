#include <gtest/gtest.h>

#include "pdd/generators.hpp"
#include "pdd/oracle.hpp"
#include "pdd/preprocess.hpp"
#include "support.hpp"

using namespace pdd;
using namespace pdd::testing;

namespace {

Instance random_instance(std::uint64_t seed, std::size_t n) {
  gen::RandomParams p;
  p.n = n;
  p.seed = seed;
  p.density = 0.1 + 0.05 * static_cast<double>(seed % 8);
  p.k_fraction = 0.1 + 0.1 * static_cast<double>(seed % 8);
  p.d_fraction = 0.2 + 0.1 * static_cast<double>(seed % 7);
  p.tree = static_cast<gen::TreeShape>(seed % 4);
  p.web = static_cast<gen::WebShape>(seed % 7);
  return gen::gen_random(p);
}

}  // namespace

TEST(SingleSource, Arithmetic) {
  Instance inst = instance_a(2, 8);
  SourceTransform t = single_source_transform(inst);
  const Instance& out = t.instance;
  EXPECT_EQ(out.n(), 4u);
  EXPECT_TRUE(out.web.has_arc(t.star, 0));
  EXPECT_TRUE(out.web.has_arc(t.star, 2));
  EXPECT_FALSE(out.web.has_arc(t.star, 1));
  EXPECT_EQ(out.tree.weight(out.tree.leaf(t.star)), 9u);
  EXPECT_EQ(out.k, 3u);
  EXPECT_EQ(out.D, 17u);
  EXPECT_EQ(members(out.web.sources()), (std::vector<TaxonId>{t.star}));
}

TEST(SingleSource, AlreadySingleSource) {
  Instance inst = make("(a:1,b:2)r;", "a b", 2, 3);
  SourceTransform t = single_source_transform(inst);
  EXPECT_EQ(members(t.instance.web.sources()), (std::vector<TaxonId>{t.star}));
}

TEST(SingleSource, OverflowRefused) {
  Instance inst = instance_a(2, UINT64_MAX);
  EXPECT_THROW(single_source_transform(inst), OverflowError);
}

TEST(SingleSource, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Instance inst = random_instance(seed, 1 + seed % 8);
    SourceTransform t = single_source_transform(inst);
    bool orig = ref_decide(inst);
    Answer a = brute_force_decide(t.instance);
    ASSERT_EQ(a.has_value(), orig) << seed;
    if (a) {
      ASSERT_TRUE(a->taxa.test(t.star) || inst.D == 0);
      ASSERT_TRUE(is_solution(inst, strip_star(a->taxa, t)));
    }
    ASSERT_GE(brute_force_optimum(t.instance).pd_value, brute_force_optimum(inst).pd_value + inst.D + 1);
  }
}

TEST(Reachability, ChainExample) {
  Instance inst = make("(a:1,b:1,c:1)r;", "a b\nb c", 1, 1);
  Restricted r = rr_reachability_prune(inst);
  EXPECT_EQ(r.origin, (std::vector<TaxonId>{0}));
  EXPECT_EQ(r.instance.names, (std::vector<std::string>{"a"}));
  inst.k = 3;
  EXPECT_EQ(rr_reachability_prune(inst).instance.n(), 3u);
}

TEST(Reachability, PreservesOptimumAndIsIdempotent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed, 2 + seed % 9);
    Restricted r = rr_reachability_prune(inst);
    ASSERT_EQ(ref_optimum(r.instance).value, ref_optimum(inst).value) << seed;
    Restricted again = rr_reachability_prune(r.instance);
    ASSERT_EQ(again.instance, r.instance);
  }
}

TEST(HeavyEdge, Examples) {
  // ρ -> (u:5 -> {a, b}), c; a is a source
  Instance inst = make("((a:1,b:1)u:5,c:1)r;", "a b", 2, 3);
  Answer a = rr_heavy_edge_accept(rr_reachability_prune(inst).instance);
  ASSERT_TRUE(a);
  EXPECT_TRUE(is_solution(inst, a->taxa));
  inst.D = 7;
  EXPECT_FALSE(rr_heavy_edge_accept(inst));
  Instance chain = make("(a:1,b:1,c:1)r;", "a b\nb c", 1, 1);
  EXPECT_THROW(rr_heavy_edge_accept(chain), PreconditionError);
}

TEST(HeavyEdge, WitnessesAreSolutions) {
  int fired = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Instance inst = random_instance(seed, 2 + seed % 9);
    inst.D = 1 + seed % 6;
    Restricted r = rr_reachability_prune(inst);
    Answer a = rr_heavy_edge_accept(r.instance);
    if (!a) continue;
    ++fired;
    ASSERT_TRUE(is_solution(r.instance, a->taxa));
    ASSERT_TRUE(ref_decide(inst));
  }
  EXPECT_GT(fired, 50);
}

TEST(RedundantPrey, Examples) {
  // u -> v, u -> w, v -> w
  Instance inst = make("(u:1,v:1,w:1)r;", "u v\nu w\nv w", 3, 1);
  Instance out = rr_redundant_prey(inst);
  EXPECT_FALSE(out.web.has_arc(1, 2));
  EXPECT_EQ(out.web.num_arcs(), 2u);
  // v a source: the guard keeps v -> w
  Instance src = make("(v:1,w:1)r;", "v w", 2, 1);
  EXPECT_EQ(rr_redundant_prey(src).web.num_arcs(), 1u);
}

TEST(RedundantPrey, ClusterComponentsBecomeOutStars) {
  Instance inst = make("(a:1,b:1,c:1,d:1,e:1,f:1)r;", "a b\na c\nb c\nd e\nd f\ne f", 3, 1);
  Instance out = rr_redundant_prey(inst);
  for (std::size_t x = 0; x < out.n(); ++x) {
    TaxonId t = static_cast<TaxonId>(x);
    if (!out.web.is_source(t)) {
      ASSERT_EQ(out.web.prey(t).size(), 1u);
      ASSERT_TRUE(out.web.is_source(out.web.prey(t)[0]));
    }
  }
}

TEST(RedundantPrey, PreservesOptimumAndIsIdempotent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed, 2 + seed % 9);
    Instance out = rr_redundant_prey(inst);
    ASSERT_EQ(ref_optimum(out).value, ref_optimum(inst).value) << seed;
    ASSERT_EQ(rr_redundant_prey(out), out);
  }
}

TEST(Preprocess, PipelineEarlyAnswerInOriginalIds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed, 2 + seed % 9);
    Preprocessed p = preprocess(inst);
    if (p.report.early) {
      ASSERT_TRUE(is_solution(inst, p.report.early->taxa));
    }
    ASSERT_EQ(ref_optimum(p.instance).value, ref_optimum(inst).value);
    ASSERT_EQ(p.report.origin.size(), p.instance.n());
    ASSERT_EQ(p.report.origin.size() + p.report.removed_taxa.size(), inst.n());
  }
}
