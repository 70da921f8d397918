#include <gtest/gtest.h>

#include <functional>

#include "pdd/generators.hpp"
#include "pdd/oracle.hpp"
#include "support.hpp"

using namespace pdd;
using namespace pdd::testing;

namespace {

// Plain backtracking over include/exclude decisions, then a viability filter.
std::size_t count_viable_naive(const FoodWeb& web, std::size_t size) {
  std::size_t count = 0;
  const std::size_t n = web.size();
  std::function<void(std::size_t, std::uint64_t, std::size_t)> rec = [&](std::size_t i, std::uint64_t m,
                                                                         std::size_t c) {
    if (c > size) return;
    if (i == n) {
      if (c == size && ref_viable(web, m)) ++count;
      return;
    }
    rec(i + 1, m | (std::uint64_t{1} << i), c + 1);
    rec(i + 1, m, c);
  };
  rec(0, 0, 0);
  return count;
}

}  // namespace

TEST(Oracle, DecideExamples) {
  Instance inst = instance_a(2, 8);
  Answer a = brute_force_decide(inst);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->taxa, inst.set_of({"a", "b"}));
  EXPECT_EQ(a->pd_value, 8u);
  EXPECT_FALSE(brute_force_decide(instance_a(2, 9)));
  Answer empty = brute_force_decide(instance_a(0, 0));
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->taxa.count(), 0u);
}

TEST(Oracle, OptimumExamples) {
  Instance inst = instance_a(2, 0);
  Solution s = brute_force_optimum(inst);
  EXPECT_EQ(s.pd_value, 8u);
  EXPECT_EQ(s.taxa, inst.set_of({"a", "b"}));
  EXPECT_EQ(brute_force_optimum(instance_a(3, 0)).pd_value, 10u);
  Solution one = brute_force_optimum(instance_a(1, 0));
  EXPECT_EQ(one.pd_value, 3u);
  EXPECT_EQ(one.taxa, inst.set_of({"a"}));
}

TEST(Oracle, EnumerationExamples) {
  Instance inst = instance_a();
  auto ones = viable_sets(inst.web, 1);
  ASSERT_EQ(ones.size(), 2u);
  EXPECT_EQ(ones[0], inst.set_of({"a"}));
  EXPECT_EQ(ones[1], inst.set_of({"c"}));
  auto zero = viable_sets(inst.web, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].count(), 0u);
  auto twos = viable_sets(inst.web, 2);
  ASSERT_EQ(twos.size(), 2u);
  EXPECT_EQ(twos[0], inst.set_of({"a", "b"}));
  EXPECT_EQ(twos[1], inst.set_of({"a", "c"}));
  EXPECT_THROW(viable_sets(inst.web, 4), PreconditionError);
}

TEST(Oracle, EnumerationCountsMatchNaive) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::RandomParams p;
    p.n = 6 + seed % 7;
    p.density = 0.05 + 0.05 * static_cast<double>(seed % 9);
    p.seed = seed;
    p.web = static_cast<gen::WebShape>(seed % 7);
    Instance inst = gen::gen_random(p);
    for (std::size_t size = 0; size <= inst.n(); ++size) {
      auto sets = viable_sets(inst.web, size);
      ASSERT_EQ(sets.size(), count_viable_naive(inst.web, size)) << "seed " << seed << " size " << size;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        ASSERT_TRUE(is_viable(inst.web, sets[i]));
        ASSERT_EQ(sets[i].count(), size);
        if (i > 0) {
          // lexicographic order of sorted id sequences
          ASSERT_LT(members(sets[i - 1]), members(sets[i]));
        }
      }
    }
  }
}

TEST(Oracle, AgreesWithReferenceAndItself) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    gen::RandomParams p;
    p.n = 1 + seed % 10;
    p.seed = seed;
    p.k_fraction = 0.1 * static_cast<double>(seed % 11);
    p.d_fraction = 0.3 + 0.05 * static_cast<double>(seed % 9);
    p.tree = static_cast<gen::TreeShape>(seed % 4);
    Instance inst = gen::gen_random(p);
    RefOptimum ref = ref_optimum(inst);
    Solution opt = brute_force_optimum(inst);
    ASSERT_EQ(opt.pd_value, ref.value);
    ASSERT_TRUE(opt.certificate);
    ASSERT_EQ(pd(inst.tree, opt.taxa), opt.pd_value);
    ASSERT_LE(opt.taxa.count(), inst.k);
    ASSERT_TRUE(is_viable(inst.web, opt.taxa));
    Answer dec = brute_force_decide(inst);
    ASSERT_EQ(dec.has_value(), opt.pd_value >= inst.D);
    if (dec) {
      ASSERT_TRUE(ref_is_solution(inst, dec->taxa));
    }
  }
}

TEST(Oracle, BudgetRefusal) {
  gen::RandomParams p;
  p.n = 40;
  p.k_fraction = 0.5;
  Instance inst = gen::gen_random(p);
  EXPECT_THROW(brute_force_decide(inst), BudgetExceeded);
  EXPECT_THROW(brute_force_optimum(inst, {1000}), BudgetExceeded);
  inst.k = 38;
  EXPECT_NO_THROW(brute_force_optimum(inst));
}

TEST(Oracle, BinomialSaturates) {
  EXPECT_EQ(binomial(6, 3), 20u);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
}
