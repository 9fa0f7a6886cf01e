#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tally/database.hpp"
#include "tally/query.hpp"
#include "tally/strategy.hpp"

namespace tally {

using Nanoseconds = std::chrono::nanoseconds;

/// Stream of uniformly random queries: |Pa| uniform in [1, n-1], then target
/// and parents drawn without replacement. Reproducible from the seed.
std::vector<QuerySpec> random_query_stream(std::size_t n, std::size_t count, std::uint64_t seed);

struct BenchOptions {
  std::size_t num_queries = 1000;
  std::uint64_t seed = 1;
  std::size_t repetitions = 5;
  /// Once one repetition exceeds this, the remaining repetitions are skipped.
  std::optional<Nanoseconds> timeout;
  /// Worker threads running queries concurrently; 1 keeps timings clean.
  std::size_t threads = 1;
  StrategyOptions strategy;
};

struct StrategyStatus {
  StrategyKind kind = StrategyKind::kBitmap;
  bool available = false;
  double build_seconds = 0.0;
  std::string error;
};

struct TimingRecord {
  std::size_t query_id = 0;
  StrategyKind strategy = StrategyKind::kBitmap;
  std::size_t parent_count = 0;
  std::vector<Nanoseconds> durations;
  Count records = 0;
  bool timed_out = false;

  /// Arithmetic mean of the repetitions, in microseconds.
  double mean_us() const;
};

struct BenchResult {
  std::vector<QuerySpec> queries;
  std::vector<StrategyStatus> strategies;
  /// Strategy-major: all queries of the first available strategy, then the next.
  std::vector<TimingRecord> records;
};

/// Runs the same random stream through every strategy with a NullSink.
/// Index construction is timed separately; an ADtree that fails to build is
/// reported as unavailable and the other strategies still run.
BenchResult bench_random(const Database& db, std::span<const StrategyKind> strategies,
                         const BenchOptions& options);

/// Same, on an explicit query list.
BenchResult bench_queries(const Database& db, std::span<const StrategyKind> strategies,
                          std::vector<QuerySpec> queries, const BenchOptions& options);

struct LatencySummary {
  StrategyKind strategy = StrategyKind::kBitmap;
  std::size_t queries = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p95_us = 0.0;
  /// Mean response time per |Pa|.
  std::map<std::size_t, double> mean_us_by_parents;
};

/// One summary per available strategy, computed over per-query mean times.
std::vector<LatencySummary> summarize(const BenchResult& result);

/// Linear-interpolated percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

}  // namespace tally
