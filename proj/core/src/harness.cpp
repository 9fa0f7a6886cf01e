#include "tally/harness.hpp"

#include <algorithm>
#include <numeric>

#include "tally/parallel.hpp"
#include "tally/rng.hpp"

namespace tally {

using Clock = std::chrono::steady_clock;

std::vector<QuerySpec> random_query_stream(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random queries need at least two variables");
  SplitMix64 rng(seed);
  std::vector<VarIndex> pool(n);
  std::vector<QuerySpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t parents = 1 + rng.uniform(n - 1);
    std::iota(pool.begin(), pool.end(), VarIndex{0});
    for (std::size_t t = 0; t <= parents; ++t) {
      std::swap(pool[t], pool[t + rng.uniform(n - t)]);
    }
    out.push_back(QuerySpec{pool[0], {pool.begin() + 1, pool.begin() + 1 + parents}});
  }
  return out;
}

double TimingRecord::mean_us() const {
  if (durations.empty()) return 0.0;
  Nanoseconds total{0};
  for (const auto d : durations) total += d;
  return static_cast<double>(total.count()) / static_cast<double>(durations.size()) / 1e3;
}

BenchResult bench_random(const Database& db, std::span<const StrategyKind> strategies,
                         const BenchOptions& options) {
  return bench_queries(db, strategies,
                       random_query_stream(db.num_variables(), options.num_queries, options.seed),
                       options);
}

BenchResult bench_queries(const Database& db, std::span<const StrategyKind> strategies,
                          std::vector<QuerySpec> queries, const BenchOptions& options) {
  if (options.repetitions == 0) throw InvalidArgument("repetitions must be at least 1");
  BenchResult result;
  result.queries = std::move(queries);

  for (const auto kind : strategies) {
    StrategyStatus status;
    status.kind = kind;
    std::unique_ptr<Strategy> strategy;
    const auto build_start = Clock::now();
    try {
      strategy = make_strategy(kind, db, options.strategy);
      status.available = true;
    } catch (const AdtreeBuildError& e) {
      status.error = e.what();
    }
    status.build_seconds = std::chrono::duration<double>(Clock::now() - build_start).count();
    result.strategies.push_back(status);
    if (!strategy) continue;

    std::vector<TimingRecord> records(result.queries.size());
    detail::parallel_for(result.queries.size(), options.threads, [&](std::size_t i) {
      const QuerySpec& q = result.queries[i];
      TimingRecord& rec = records[i];
      rec.query_id = i;
      rec.strategy = kind;
      rec.parent_count = q.parents.size();
      for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
        NullSink sink;
        const auto start = Clock::now();
        strategy->query(q, sink);
        const auto elapsed = std::chrono::duration_cast<Nanoseconds>(Clock::now() - start);
        rec.durations.push_back(elapsed);
        rec.records = sink.result();
        if (options.timeout && elapsed > *options.timeout) {
          rec.timed_out = true;
          break;
        }
      }
    });
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  return result;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

std::vector<LatencySummary> summarize(const BenchResult& result) {
  std::vector<LatencySummary> out;
  for (const auto& status : result.strategies) {
    if (!status.available) continue;
    LatencySummary summary;
    summary.strategy = status.kind;
    std::vector<double> means;
    std::map<std::size_t, std::pair<double, std::size_t>> by_parents;
    for (const auto& rec : result.records) {
      if (rec.strategy != status.kind) continue;
      const double mean = rec.mean_us();
      means.push_back(mean);
      auto& [sum, n] = by_parents[rec.parent_count];
      sum += mean;
      ++n;
    }
    summary.queries = means.size();
    if (!means.empty()) {
      summary.mean_us = std::accumulate(means.begin(), means.end(), 0.0) /
                        static_cast<double>(means.size());
      summary.median_us = percentile(means, 0.5);
      summary.p95_us = percentile(means, 0.95);
    }
    for (const auto& [parents, acc] : by_parents) {
      summary.mean_us_by_parents[parents] = acc.first / static_cast<double>(acc.second);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace tally
