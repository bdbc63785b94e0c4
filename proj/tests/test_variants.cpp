#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "deplen/variants.hpp"
#include "fixtures.hpp"

namespace deplen {
namespace {

SentencePlan plan_with_lengths(std::vector<int> lengths, std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  return std::get<SentencePlan>(decompose(testing::plan_tree(gen, lengths, 1)));
}

std::vector<int> lengths_in(const SentencePlan& plan, const Order& order) {
  std::vector<int> out;
  for (auto c : order) out.push_back(plan.preverbal[c].length());
  return out;
}

// Brute force over all k! orders.
std::pair<long, long> min_max_dl(const SentencePlan& plan) {
  auto perm = plan.identity();
  long lo = std::numeric_limits<long>::max();
  long hi = std::numeric_limits<long>::min();
  do {
    const long d = main_verb_dl(plan, perm);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {lo, hi};
}

TEST(GenerateVariants, ExhaustiveBelowCap) {
  const auto k4 = generate_variants(plan_with_lengths({1, 2, 3, 4}), 100, 0);
  EXPECT_EQ(k4.sampled_variants.size(), 23u);
  std::set<Order> distinct(k4.sampled_variants.begin(), k4.sampled_variants.end());
  EXPECT_EQ(distinct.size(), 23u);
  EXPECT_FALSE(distinct.count(k4.reference_order));
  EXPECT_TRUE(std::is_sorted(k4.sampled_variants.begin(), k4.sampled_variants.end()));

  const auto k2 = generate_variants(plan_with_lengths({2, 2}), 100, 0);
  ASSERT_EQ(k2.sampled_variants.size(), 1u);
  EXPECT_EQ(k2.sampled_variants[0], (Order{1, 0}));
}

TEST(GenerateVariants, SampledAboveCap) {
  const auto plan = plan_with_lengths({1, 2, 3, 4, 5});
  const auto v = generate_variants(plan, 100, 42);
  EXPECT_EQ(v.sampled_variants.size(), 99u);
  std::set<Order> distinct(v.sampled_variants.begin(), v.sampled_variants.end());
  EXPECT_EQ(distinct.size(), 99u);
  EXPECT_FALSE(distinct.count(plan.identity()));
  EXPECT_EQ(generate_variants(plan, 100, 42).sampled_variants, v.sampled_variants);
  EXPECT_NE(generate_variants(plan, 100, 43).sampled_variants, v.sampled_variants);
}

TEST(GenerateVariants, CapBoundary) {
  const auto plan = plan_with_lengths({1, 1, 1});
  EXPECT_EQ(generate_variants(plan, 6, 0).sampled_variants.size(), 5u);
  EXPECT_EQ(generate_variants(plan, 5, 0).sampled_variants.size(), 4u);
  EXPECT_EQ(generate_variants(plan, 2, 0).sampled_variants.size(), 1u);
}

TEST(GenerateVariants, CapBelowTwoIsConfigError) {
  EXPECT_THROW(generate_variants(plan_with_lengths({1, 2}), 1, 0), ConfigError);
  EXPECT_THROW(generate_variants(plan_with_lengths({1, 2}), 0, 0), ConfigError);
}

TEST(GenerateVariants, SampledVariantsAreUniform) {
  // k = 6, cap 100: each of the 719 non-reference orders has inclusion
  // probability 99/719.
  const auto plan = plan_with_lengths({1, 1, 2, 2, 3, 3});
  std::map<Order, int> hits;
  const int runs = 1000;
  for (int r = 0; r < runs; ++r) {
    for (const auto& v : generate_variants(plan, 100, 1000 + r).sampled_variants) ++hits[v];
  }
  EXPECT_EQ(hits.size(), 719u);
  const double expected = runs * 99.0 / 719.0;
  double chi2 = 0;
  for (const auto& [order, n] : hits) chi2 += (n - expected) * (n - expected) / expected;
  // 718 degrees of freedom; mean 718, sd ~38. The without-replacement
  // dependence only shrinks the variance.
  EXPECT_LT(chi2, 718 + 6 * 38);
}

TEST(Orders, AscendingAndDescendingAreStable) {
  const auto plan = plan_with_lengths({3, 1, 3, 2, 1});
  EXPECT_EQ(order_ascending(plan), (Order{1, 4, 3, 0, 2}));
  EXPECT_EQ(order_descending(plan), (Order{0, 2, 3, 1, 4}));
}

TEST(Orders, RandomIsUniformOverSixOrders) {
  const auto plan = plan_with_lengths({1, 2, 3});
  std::map<Order, int> hits;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) ++hits[order_random(plan, static_cast<std::uint64_t>(s))];
  ASSERT_EQ(hits.size(), 6u);
  for (const auto& [order, n] : hits) EXPECT_NEAR(n / double(draws), 1.0 / 6.0, 0.02);
}

TEST(LeastEffort, Figure3DepictedRandomToLeastEffort) {
  const auto plan = std::get<SentencePlan>(decompose(testing::figure3_tree()));
  const Order depicted{1, 2, 0, 3};
  const auto moved = apply_least_effort(plan, depicted);
  EXPECT_EQ(moved, (Order{1, 2, 3, 0}));
  EXPECT_EQ(main_verb_dl(plan, depicted), 20);
  EXPECT_EQ(main_verb_dl(plan, moved), 17);
}

TEST(LeastEffort, TiesMoveTheOneNearestTheVerb) {
  const auto plan = plan_with_lengths({1, 3, 1, 2});
  EXPECT_EQ(apply_least_effort(plan, Order{0, 1, 2, 3}), (Order{0, 1, 3, 2}));
  EXPECT_EQ(apply_least_effort(plan, Order{2, 3, 1, 0}), (Order{2, 3, 1, 0}));
}

TEST(Optimality, DescendingMinimizesAscendingMaximizes) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 500; ++i) {
    const auto plan = testing::random_plan(gen, 2, 6);
    const auto [lo, hi] = min_max_dl(plan);
    ASSERT_EQ(main_verb_dl(plan, order_descending(plan)), lo);
    ASSERT_EQ(main_verb_dl(plan, order_ascending(plan)), hi);
  }
}

TEST(LeastEffort, NeverIncreasesDl) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 10000; ++i) {
    const auto plan = testing::random_plan(gen, 2, 6);
    auto start = plan.identity();
    std::shuffle(start.begin(), start.end(), gen);
    const auto moved = apply_least_effort(plan, start);
    ASSERT_LE(main_verb_dl(plan, moved), main_verb_dl(plan, start));
    if (plan.k() == 2) {
      ASSERT_EQ(lengths_in(plan, moved), lengths_in(plan, order_descending(plan)));
      ASSERT_EQ(main_verb_dl(plan, moved), main_verb_dl(plan, order_descending(plan)));
    }
  }
}

TEST(Linearize, Figure3Strings) {
  const auto plan = std::get<SentencePlan>(decompose(testing::figure3_tree()));
  const auto words = forms(plan, linearize(plan, Order{3, 2, 1, 0}));
  const std::vector<std::string> expected{"rote", "hue",    "bacche", "ko",  "baajaar", "jaate",
                                          "samaye", "maa", "ne",     "toffee", "di"};
  EXPECT_EQ(words, expected);
}

}  // namespace
}  // namespace deplen
