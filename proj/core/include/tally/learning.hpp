#pragma once

#include <chrono>
#include <vector>

#include "tally/strategy.hpp"

namespace tally {

struct LearnOptions {
  std::size_t max_parents = 6;
  /// Target variables are independent; > 1 scores them concurrently.
  std::size_t threads = 1;
};

struct ParentSetResult {
  VarIndex target = 0;
  /// Ascending variable indexes.
  std::vector<VarIndex> parents;
  double score = 0.0;
  std::size_t queries = 0;
  std::chrono::nanoseconds query_time{0};
  std::chrono::nanoseconds total_time{0};

  /// Share of total_time spent inside counting queries, in [0, 1].
  double query_fraction() const noexcept;
};

/// For every variable, scores each parent set of size <= max_parents with
/// MDL, walking the subset lattice level by level from the empty set, and
/// keeps the minimum. Equal scores go to the lexicographically smallest set.
std::vector<ParentSetResult> learn_parents(const Strategy& strategy, const LearnOptions& options);

/// Subsets of `pool` of size k in lexicographic order.
std::vector<std::vector<VarIndex>> combinations(std::span<const VarIndex> pool, std::size_t k);

}  // namespace tally
