#include "tally/learning.hpp"

#include <algorithm>
#include <numeric>

#include "tally/parallel.hpp"

namespace tally {

using Clock = std::chrono::steady_clock;

double ParentSetResult::query_fraction() const noexcept {
  if (total_time.count() <= 0) return 0.0;
  return std::clamp(static_cast<double>(query_time.count()) /
                        static_cast<double>(total_time.count()),
                    0.0, 1.0);
}

std::vector<std::vector<VarIndex>> combinations(std::span<const VarIndex> pool, std::size_t k) {
  std::vector<std::vector<VarIndex>> out;
  if (k > pool.size()) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<VarIndex> combo(k);
    for (std::size_t t = 0; t < k; ++t) combo[t] = pool[idx[t]];
    out.push_back(std::move(combo));
    std::size_t t = k;
    while (t > 0 && idx[t - 1] == pool.size() - k + t - 1) --t;
    if (t == 0) break;
    ++idx[t - 1];
    for (std::size_t u = t; u < k; ++u) idx[u] = idx[u - 1] + 1;
  }
  return out;
}

namespace {

ParentSetResult best_parents(const Strategy& strategy, VarIndex target, std::size_t max_parents) {
  const auto total_start = Clock::now();
  const Database& db = strategy.database();
  std::vector<VarIndex> pool;
  for (std::size_t v = 0; v < db.num_variables(); ++v) {
    if (v != target) pool.push_back(static_cast<VarIndex>(v));
  }

  ParentSetResult best;
  best.target = target;
  bool have_best = false;
  for (std::size_t level = 0; level <= max_parents; ++level) {
    for (auto& parents : combinations(pool, level)) {
      QuerySpec q{target, parents};
      MdlScore score = MdlScore::for_query(db, q);
      const auto start = Clock::now();
      strategy.query(q, score);
      best.query_time += Clock::now() - start;
      ++best.queries;

      const double s = score.result();
      if (!have_best || s < best.score || (s == best.score && parents < best.parents)) {
        best.score = s;
        best.parents = std::move(parents);
        have_best = true;
      }
    }
  }
  best.total_time = Clock::now() - total_start;
  return best;
}

}  // namespace

std::vector<ParentSetResult> learn_parents(const Strategy& strategy, const LearnOptions& options) {
  const std::size_t n = strategy.database().num_variables();
  if (options.max_parents >= n) {
    throw InvalidArgument("max_parents must be < n (" + std::to_string(n) + ")");
  }
  std::vector<ParentSetResult> out(n);
  detail::parallel_for(n, options.threads, [&](std::size_t i) {
    out[i] = best_parents(strategy, static_cast<VarIndex>(i), options.max_parents);
  });
  return out;
}

}  // namespace tally
