#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tally/aggregators.hpp"
#include "tally/bitmap.hpp"
#include "tally/database.hpp"
#include "tally/harness.hpp"
#include "tally/radix.hpp"
#include "tally/strategy.hpp"

namespace {

constexpr std::size_t kVariables = 20;
constexpr tally::Arity kArity = 3;
constexpr std::size_t kQueries = 200;

// Random query stream through one strategy; args are (strategy, m).
void BM_QueryStream(benchmark::State& state) {
  const auto kind = static_cast<tally::StrategyKind>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const tally::Database db = tally::generate_synthetic(kVariables, m, kArity, 1);
  const auto queries = tally::random_query_stream(kVariables, kQueries, 2);
  const auto strategy = tally::make_strategy(kind, db);
  for (auto _ : state) {
    for (const auto& q : queries) {
      tally::NullSink sink;
      strategy->query(q, sink);
    }
  }
  state.SetLabel(std::string(tally::to_string(kind)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kQueries));
}
void stream_args(benchmark::internal::Benchmark* b) {
  using tally::StrategyKind;
  for (const int m : {1000, 10000}) {
    for (const StrategyKind kind : tally::kAllStrategies) {
      // ADtree only at 10^3 rows.
      if (kind == StrategyKind::kAdtree && m > 1000) continue;
      b->Args({static_cast<int>(kind), m});
    }
  }
}
BENCHMARK(BM_QueryStream)->Apply(stream_args)->Unit(benchmark::kMicrosecond);

tally::QuerySpec fixed_query(std::size_t parents) {
  tally::QuerySpec q;
  q.target = 0;
  for (std::size_t p = 1; p <= parents; ++p) q.parents.push_back(static_cast<tally::VarIndex>(p));
  return q;
}

// One query with a fixed number of parents; args are (|Pa|, m).
void BM_RadixParents(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(1));
  const tally::RadixEngine engine(tally::generate_synthetic(kVariables, m, kArity, 3));
  const auto q = fixed_query(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    tally::NullSink sink;
    engine.query(q, sink);
  }
}
BENCHMARK(BM_RadixParents)->ArgsProduct({{1, 2, 4, 8}, {100000}})->Unit(benchmark::kMicrosecond);

void BM_BitmapParents(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(1));
  const tally::BitmapIndex index(tally::generate_synthetic(kVariables, m, kArity, 3));
  const auto q = fixed_query(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    tally::NullSink sink;
    index.query(q, sink);
  }
}
BENCHMARK(BM_BitmapParents)->ArgsProduct({{1, 2, 4, 8}, {100000}})->Unit(benchmark::kMicrosecond);

// Streaming a query into the log-likelihood aggregator.
void BM_LogLikelihood(benchmark::State& state) {
  const tally::BitmapIndex index(tally::generate_synthetic(kVariables, 10000, kArity, 4));
  const auto q = fixed_query(3);
  for (auto _ : state) {
    tally::LogLikelihood ll;
    index.query(q, ll);
    benchmark::DoNotOptimize(ll.result());
  }
}
BENCHMARK(BM_LogLikelihood)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
