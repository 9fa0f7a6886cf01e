#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tally/database.hpp"
#include "tally/partition.hpp"
#include "tally/query.hpp"

namespace tally {

/// Rows of one partition (one bucket).
using Partition = std::vector<RowIndex>;

/// Splits `rows` by the state of `var`: element t holds, in input order, the
/// rows whose state is t. Always returns arity(var) partitions, some possibly
/// empty.
std::vector<Partition> buckets(const Database& db, VarIndex var, std::span<const RowIndex> rows);

/// Optional instrumentation of a radix query: a snapshot of the partition
/// layout after every parent level plus the peak number of row-index and
/// partition entries held at once. Traced queries never take the small-partition
/// shortcut, so every level is recorded in full.
struct RadixTrace {
  struct Level {
    VarIndex var = 0;
    std::vector<RowIndex> rows;
    /// Partition t spans rows[bounds[t], bounds[t + 1]).
    std::vector<std::size_t> bounds;
  };
  std::vector<Level> levels;
  std::size_t peak_index_entries = 0;
};

/// Radix strategy.
///
/// Row indexes are MSD-partitioned one parent at a time with a counting-sort
/// pass per bucket, ping-ponging between two m-length index arrays. The final
/// pass over the target only counts, it never scatters. Parents are processed
/// in QuerySpec order. Partitions of one or two rows leave the level-wise
/// passes early; a pair is settled by comparing its two rows directly.
class RadixEngine {
 public:
  /// With `cache_first_level`, every column is counting-sorted once up front
  /// so the first partitioning level of each query is free. Off by default:
  /// the cache holds n * m row indexes, against O(m) scratch per query.
  explicit RadixEngine(Database db, bool cache_first_level = false);

  const Database& database() const noexcept { return db_; }
  bool caches_first_level() const noexcept { return !cached_rows_.empty(); }

  template <Sink F>
  void query(const QuerySpec& q, F& sink, RadixTrace* trace = nullptr) const;

  /// Point query: keeps only the rows matching each assigned state in turn.
  Count count(const Assignment& a) const;

 private:
  std::span<const RowIndex> cached_rows(VarIndex var) const {
    return {cached_rows_.data() + static_cast<std::size_t>(var) * db_.num_rows(), db_.num_rows()};
  }
  std::span<const std::size_t> cached_bounds(VarIndex var) const {
    return {cached_bounds_.data() + bound_offsets_[var], bound_offsets_[var + 1] - bound_offsets_[var]};
  }

  Database db_;
  std::vector<RowIndex> cached_rows_;
  // Non-empty partition boundaries per variable, concatenated.
  std::vector<std::size_t> cached_bounds_;
  std::vector<std::size_t> bound_offsets_;
};

template <Sink F>
void RadixEngine::query(const QuerySpec& q, F& sink, RadixTrace* trace) const {
  q.validate(db_);
  const std::size_t m = db_.num_rows();
  const std::size_t levels = q.parents.size();
  const auto target_col = db_.column(q.target);
  const Arity target_arity = db_.arity(q.target);
  std::vector<Count> counts(target_arity, 0);
  std::vector<State> parent_states(levels);

  auto states_of = [&](RowIndex row) -> std::span<const State> {
    if constexpr (ConfigurationSink<F>) {
      for (std::size_t t = 0; t < levels; ++t) parent_states[t] = db_.at(row, q.parents[t]);
    }
    return parent_states;
  };

  auto emit_partition = [&](std::span<const RowIndex> part) {
    const Count nij = part.size();
    if (nij == 1) {
      const State k = target_col[part.front()];
      detail::emit(sink, 1, 1, [&] { return Configuration{states_of(part.front()), k}; });
      return;
    }
    for (const RowIndex row : part) ++counts[target_col[row]];
    for (Arity k = 0; k < target_arity; ++k) {
      if (counts[k] == 0) continue;
      const Count nijk = counts[k];
      counts[k] = 0;
      detail::emit(sink, nijk, nij, [&] {
        return Configuration{states_of(part.front()), static_cast<State>(k)};
      });
    }
  };

  if (q.parents.empty()) {
    for (const State s : target_col) ++counts[s];
    for (Arity k = 0; k < target_arity; ++k) {
      if (counts[k] == 0) continue;
      detail::emit(sink, counts[k], m, [&] { return Configuration{parent_states, static_cast<State>(k)}; });
    }
    if (trace) trace->peak_index_entries = 0;
    return;
  }

  std::vector<std::span<const State>> columns(levels);
  std::vector<Arity> arities(levels);
  for (std::size_t t = 0; t < levels; ++t) {
    columns[t] = db_.column(q.parents[t]);
    arities[t] = db_.arity(q.parents[t]);
  }

  auto emit_single = [&](RowIndex row) {
    detail::emit(sink, 1, 1, [&] { return Configuration{states_of(row), target_col[row]}; });
  };
  // A partition of two rows is settled by comparing the rows' remaining
  // parent states directly.
  auto finish_pair = [&](RowIndex a, RowIndex b, std::size_t level) {
    while (level < levels && columns[level][a] == columns[level][b]) ++level;
    const State ta = target_col[a], tb = target_col[b];
    if (level < levels) {
      emit_single(a);
      emit_single(b);
    } else if (ta == tb) {
      detail::emit(sink, 2, 2, [&] { return Configuration{states_of(a), ta}; });
    } else {
      detail::emit(sink, 1, 2, [&] { return Configuration{states_of(a), ta}; });
      detail::emit(sink, 1, 2, [&] { return Configuration{states_of(b), tb}; });
    }
  };

  // Live partitions of the current level as [begin, end) into src; the first
  // part_count entries of parts are in use.
  using Range = detail::RowRange;
  // Scratch is left uninitialized: every entry is written before it is read.
  // Partition arrays get one spare entry for the speculative write in split_range.
  auto front = std::make_unique_for_overwrite<RowIndex[]>(m);
  auto back = std::make_unique_for_overwrite<RowIndex[]>(m);
  auto parts = std::make_unique_for_overwrite<Range[]>(m + 1);
  auto next_parts = std::make_unique_for_overwrite<Range[]>(m + 1);
  std::size_t part_count = 0;

  auto snapshot = [&](VarIndex var, std::span<const RowIndex> src) {
    RadixTrace::Level level{var, {src.begin(), src.end()}, {0}};
    for (std::size_t i = 0; i < part_count; ++i) level.bounds.push_back(parts[i].end);
    trace->levels.push_back(std::move(level));
    trace->peak_index_entries = 2 * m + 2 * (m + 1);
  };

  // Level 0: the first parent.
  std::span<const RowIndex> src;
  const VarIndex first = q.parents.front();
  if (caches_first_level()) {
    src = cached_rows(first);
    const auto cb = cached_bounds(first);
    for (std::size_t b = 0; b + 1 < cb.size(); ++b) {
      parts[part_count++] = {static_cast<RowIndex>(cb[b]), static_cast<RowIndex>(cb[b + 1])};
    }
  } else {
    const auto col = columns[0];
    const Arity r = arities[0];
    std::vector<std::size_t> offset(r + 1, 0);
    for (const State s : col) ++offset[s + 1];
    for (Arity s = 0; s < r; ++s) {
      offset[s + 1] += offset[s];
      if (offset[s + 1] > offset[s]) {
        parts[part_count++] = {static_cast<RowIndex>(offset[s]), static_cast<RowIndex>(offset[s + 1])};
      }
    }
    for (std::size_t row = 0; row < m; ++row) front[offset[col[row]]++] = static_cast<RowIndex>(row);
    src = {front.get(), m};
  }
  if (trace) snapshot(first, src);

  std::vector<RowIndex> offset;
  auto keys = std::make_unique_for_overwrite<State[]>(m);
  for (std::size_t level = 1; level < levels; ++level) {
    const auto col = columns[level];
    const Arity r = arities[level];
    offset.resize(r + 1);

    // Write into whichever array src does not live in.
    RowIndex* dst = src.data() == front.get() ? back.get() : front.get();

    std::size_t next_count = 0;
    for (std::size_t pi = 0; pi < part_count; ++pi) {
      const Range p = parts[pi];
      const std::size_t size = p.end - p.begin;
      // Singletons and pairs leave the level-wise passes; traced queries keep
      // every level complete.
      if (size <= 2 && !trace) {
        if (size == 1) {
          emit_single(src[p.begin]);
        } else {
          finish_pair(src[p.begin], src[p.begin + 1], level);
        }
        continue;
      }
      next_count += detail::split_range(col, r, src.data(), dst, p, offset.data(), &next_parts[next_count], keys.get());
    }
    parts.swap(next_parts);
    part_count = next_count;
    src = {dst, m};
    if (trace) snapshot(q.parents[level], src);
  }

  for (std::size_t pi = 0; pi < part_count; ++pi) {
    emit_partition(src.subspan(parts[pi].begin, parts[pi].end - parts[pi].begin));
  }
}

}  // namespace tally
