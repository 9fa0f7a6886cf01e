#include <gtest/gtest.h>

#include "support.hpp"
#include "tally/mining.hpp"

namespace tally {
namespace {

TEST(MeetsThreshold, Inclusive) {
  EXPECT_TRUE(meets_threshold(1, 5, 0.2));
  EXPECT_FALSE(meets_threshold(1, 5, 0.2000001));
  EXPECT_TRUE(meets_threshold(3, 10, 0.3));
}

TEST(MineRules, AllOnesDatabase) {
  const Database db({2, 2, 2}, std::vector<std::vector<State>>(3, std::vector<State>(10, 1)));
  const auto result = mine_rules(*make_strategy(StrategyKind::kRadix, db), {0.2, 0.3, 3});
  ASSERT_EQ(result.rules.size(), 9u);
  for (const auto& r : result.rules) {
    EXPECT_EQ(r.support, 1.0);
    EXPECT_EQ(r.confidence, 1.0);
  }
  EXPECT_EQ(result.rules.front().antecedent, (std::vector<VarIndex>{0}));
  EXPECT_EQ(result.rules.front().consequent, 1u);
  EXPECT_EQ(result.rules.back().size(), 3u);
  EXPECT_EQ(result.frequent_per_level, (std::vector<std::size_t>{3, 3, 1}));
}

TEST(MineRules, CopiedVariableRules) {
  const Database db = testing::copy_database(3, 1000, 5);
  const auto result = mine_rules(*make_strategy(StrategyKind::kBitmap, db), {});
  EXPECT_EQ(result.rules, testing::brute_force_rules(db, {}));
  bool forward = false, backward = false;
  for (const auto& r : result.rules) {
    if (r.antecedent == std::vector<VarIndex>{0} && r.consequent == 1) forward = r.confidence == 1.0;
    if (r.antecedent == std::vector<VarIndex>{1} && r.consequent == 0) backward = r.confidence == 1.0;
  }
  EXPECT_TRUE(forward);
  EXPECT_TRUE(backward);
}

TEST(MineRules, InvariantAcrossStrategiesAndMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Database binary = generate_synthetic(2 + seed % 9, 20 + seed * 31, Arity{2}, seed);
    const auto expected = testing::brute_force_rules(binary, {});
    for (const auto kind : kAllStrategies) {
      const auto result = mine_rules(*make_strategy(kind, binary), {});
      EXPECT_EQ(result.rules, expected) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(MineRules, ThresholdAboveOneGivesNothing) {
  const Database db = testing::copy_database(4, 100, 1);
  const auto result = mine_rules(*make_strategy(StrategyKind::kHash, db), {1.01, 0.3, 6});
  EXPECT_TRUE(result.rules.empty());
  EXPECT_EQ(result.frequent_per_level, (std::vector<std::size_t>{0}));
}

TEST(MineRules, RejectsBadInput) {
  const auto fixture = make_strategy(StrategyKind::kBitmap, testing::fixture());
  EXPECT_THROW(mine_rules(*fixture, {}), InvalidArgument);
  const auto binary = make_strategy(StrategyKind::kBitmap, testing::copy_database(3, 10, 1));
  EXPECT_THROW(mine_rules(*binary, {0.0, 0.3, 6}), InvalidArgument);
  EXPECT_THROW(mine_rules(*binary, {0.2, -1.0, 6}), InvalidArgument);
  EXPECT_THROW(mine_rules(*binary, {0.2, 0.3, 1}), InvalidArgument);
}

}  // namespace
}  // namespace tally
