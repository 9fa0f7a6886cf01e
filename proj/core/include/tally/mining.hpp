#pragma once

#include <chrono>
#include <vector>

#include "tally/strategy.hpp"

namespace tally {

/// Item present = internal state 1 of a binary variable.
inline constexpr State kItemPresent = 1;

struct MiningOptions {
  double min_support = 0.2;
  double min_confidence = 0.3;
  /// Largest itemset (antecedent + consequent) considered.
  std::size_t max_size = 6;
};

struct AssociationRule {
  std::vector<VarIndex> antecedent;  // ascending
  VarIndex consequent = 0;
  Count itemset_count = 0;
  Count antecedent_count = 0;
  double support = 0.0;
  double confidence = 0.0;

  std::size_t size() const noexcept { return antecedent.size() + 1; }
  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct MiningResult {
  /// Sorted by (size, antecedent, consequent).
  std::vector<AssociationRule> rules;
  /// Frequent itemsets found per size, starting with size 1.
  std::vector<std::size_t> frequent_per_level;
  std::size_t count_queries = 0;
  std::chrono::nanoseconds query_time{0};
  std::chrono::nanoseconds total_time{0};
};

/// Inclusive threshold test num / den >= threshold. Every miner shares it so
/// boundary cases resolve identically.
bool meets_threshold(Count num, Count den, double threshold) noexcept;

/// Level-wise (Apriori) frequent itemset mining over point counts from the
/// strategy, then rules X \ {c} => c for every frequent itemset X with
/// |X| >= 2. Throws InvalidArgument for non-binary data or bad options.
MiningResult mine_rules(const Strategy& strategy, const MiningOptions& options);

bool rule_order(const AssociationRule& a, const AssociationRule& b);

}  // namespace tally
