#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tally/bitset.hpp"
#include "tally/database.hpp"
#include "tally/partition.hpp"
#include "tally/query.hpp"

namespace tally {

/// Half-open range of words outside of which a bitmap is known to be zero.
struct WordRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  std::uint32_t size() const noexcept { return hi - lo; }
  friend WordRange intersect(WordRange a, WordRange b) noexcept {
    const std::uint32_t lo = std::max(a.lo, b.lo);
    return {lo, std::max(lo, std::min(a.hi, b.hi))};
  }
};

/// Narrows `r` to the non-zero words of `words`.
inline WordRange trim(std::span<const Word> words, WordRange r) noexcept {
  while (r.lo < r.hi && words[r.lo] == 0) ++r.lo;
  while (r.hi > r.lo && words[r.hi - 1] == 0) --r.hi;
  return r;
}

/// Bitmap strategy.
///
/// Each variable X_i is stored as r_i bitmaps of length m, bit p of bitmap
/// (i, v) being set iff row p has X_i = v. A query walks the configuration
/// tree depth-first, intersecting bitmaps on the way down and pruning every
/// branch whose intersection is empty. Parents are visited in ascending
/// order of empirical entropy (ties by index), fixed once at build time.
///
/// Every intersection carries the range of words that can still be
/// non-zero, and a node stops trying states once its children account for
/// all its rows. Once a node is supported by at most `sparse_limit` rows its
/// rows are copied out (an array container in Roaring terms) and the rest of
/// its subtree is resolved by counting-sort passes, as in RadixEngine.
class BitmapIndex {
 public:
  /// `sparse_limit` defaults to four rows per bitmap word, at least 32; 0 keeps every node
  /// in bitmap form.
  explicit BitmapIndex(Database db, std::optional<std::size_t> sparse_limit = std::nullopt);

  const Database& database() const noexcept { return db_; }

  std::span<const Word> bitmap(VarIndex var, State state) const noexcept {
    return {words_.data() + (offsets_[var] + state) * words_per_bitmap_, words_per_bitmap_};
  }
  WordRange bitmap_range(VarIndex var, State state) const noexcept {
    return ranges_[offsets_[var] + state];
  }
  Count state_count(VarIndex var, State state) const noexcept {
    return state_counts_[offsets_[var] + state];
  }
  std::size_t words_per_bitmap() const noexcept { return words_per_bitmap_; }
  std::size_t sparse_limit() const noexcept { return sparse_limit_; }

  /// Natural-log plug-in entropy of the column.
  double entropy(VarIndex var) const noexcept { return entropy_[var]; }
  /// Position of `var` in the global traversal order (0 = lowest entropy).
  std::size_t traversal_rank(VarIndex var) const noexcept { return rank_[var]; }
  /// Index footprint in bits: m * sum(r_i), rounded up to whole words.
  std::size_t memory_bits() const noexcept { return words_.size() * kWordBits; }

  /// Streams (N_ijk, N_ij) for every non-zero configuration of q into sink.
  template <Sink F>
  void query(const QuerySpec& q, F& sink) const;

  /// Point query: popcount of the intersection of the selected bitmaps.
  Count count(const Assignment& a) const;

  /// Parents of q reordered for traversal.
  std::vector<VarIndex> traversal_order(std::span<const VarIndex> parents) const;

 private:
  template <Sink F>
  void emit_leaf(std::span<const Word> b, WordRange range, Count nij, VarIndex target, F& sink,
                 std::span<const State> parent_states) const;

  // Slots written per word when decoding a bitmap into row indexes.
  static constexpr std::size_t kUnroll = 4;

  Database db_;
  std::size_t words_per_bitmap_ = 0;
  std::size_t sparse_limit_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Word> words_;
  std::vector<WordRange> ranges_;
  std::vector<Count> state_counts_;
  std::vector<double> entropy_;
  std::vector<std::size_t> rank_;
};

template <Sink F>
void BitmapIndex::emit_leaf(std::span<const Word> b, WordRange range, Count nij, VarIndex target,
                            F& sink, std::span<const State> parent_states) const {
  const Arity r = db_.arity(target);
  Count remaining = nij;
  for (Arity v = 0; v < r && remaining > 0; ++v) {
    Count nijk = remaining;
    // The last state needs no intersection: it holds whatever is left.
    if (v + 1 < r) {
      const auto t = static_cast<State>(v);
      const WordRange w = intersect(range, bitmap_range(target, t));
      nijk = and_popcount(b.subspan(w.lo, w.size()), bitmap(target, t).subspan(w.lo, w.size()));
    }
    if (nijk == 0) continue;
    remaining -= nijk;
    detail::emit(sink, nijk, nij, [&] {
      return Configuration{parent_states, static_cast<State>(v)};
    });
  }
}

template <Sink F>
void BitmapIndex::query(const QuerySpec& q, F& sink) const {
  q.validate(db_);
  const Count m = db_.num_rows();

  if (q.parents.empty()) {
    const Arity r = db_.arity(q.target);
    for (Arity v = 0; v < r; ++v) {
      const Count nijk = state_count(q.target, static_cast<State>(v));
      if (nijk == 0) continue;
      detail::emit(sink, nijk, m, [&] {
        return Configuration{std::span<const State>{}, static_cast<State>(v)};
      });
    }
    return;
  }

  const std::vector<VarIndex> order = traversal_order(q.parents);
  const std::size_t depth_count = order.size();
  // slot[d]: position in q.parents of the variable visited at depth d.
  std::vector<std::size_t> slot(depth_count);
  std::vector<std::span<const State>> columns(depth_count);
  std::vector<Arity> arities(depth_count);
  for (std::size_t d = 0; d < depth_count; ++d) {
    slot[d] = static_cast<std::size_t>(
        std::find(q.parents.begin(), q.parents.end(), order[d]) - q.parents.begin());
    columns[d] = db_.column(order[d]);
    arities[d] = db_.arity(order[d]);
  }
  const auto target_col = db_.column(q.target);
  const Arity target_arity = db_.arity(q.target);

  // Explicit DFS stack, one entry per depth: the scratch bitmap, its live
  // word range, the next state to try and the rows not yet claimed by a
  // child. Depth 0 reads the index bitmaps directly.
  std::vector<Word> scratch(depth_count * words_per_bitmap_);
  auto scratch_at = [&](std::size_t d) {
    return std::span<Word>(scratch.data() + d * words_per_bitmap_, words_per_bitmap_);
  };
  std::vector<std::span<const Word>> current(depth_count);
  std::vector<WordRange> range(depth_count);
  std::vector<Arity> next_state(depth_count, 0);
  std::vector<Count> unclaimed(depth_count, 0);
  std::vector<State> visited_state(depth_count, 0);
  std::vector<State> parent_states(depth_count, 0);
  unclaimed[0] = m;

  auto configuration_states = [&]() -> std::span<const State> {
    if constexpr (ConfigurationSink<F>) {
      for (std::size_t d = 0; d < depth_count; ++d) parent_states[slot[d]] = visited_state[d];
    }
    return parent_states;
  };
  auto states_of = [&](RowIndex row) -> std::span<const State> {
    if constexpr (ConfigurationSink<F>) {
      for (std::size_t d = 0; d < depth_count; ++d) parent_states[slot[d]] = columns[d][row];
    }
    return parent_states;
  };

  // Sparse tail. Rows of small nodes are copied out and refined one depth
  // at a time by counting sort, after the bitmap walk is over. A group
  // waiting at depth d lives in buffer d % 2; groups of one or two rows are
  // settled on the spot.
  std::unique_ptr<RowIndex[]> buffers[2] = {std::make_unique_for_overwrite<RowIndex[]>(m + kUnroll),
                                            std::make_unique_for_overwrite<RowIndex[]>(m + kUnroll)};
  // Groups handed over by the walk, tagged with their depth.
  struct Entry {
    detail::RowRange rows;
    std::uint32_t depth;
  };
  std::vector<Entry> entries;
  RowIndex cursor = 0;

  auto emit_single = [&](RowIndex row) {
    detail::emit(sink, 1, 1, [&] { return Configuration{states_of(row), target_col[row]}; });
  };
  auto finish_pair = [&](RowIndex a, RowIndex b, std::size_t d) {
    while (d < depth_count && columns[d][a] == columns[d][b]) ++d;
    const State ta = target_col[a], tb = target_col[b];
    if (d < depth_count) {
      emit_single(a);
      emit_single(b);
    } else if (ta == tb) {
      detail::emit(sink, 2, 2, [&] { return Configuration{states_of(a), ta}; });
    } else {
      detail::emit(sink, 1, 2, [&] { return Configuration{states_of(a), ta}; });
      detail::emit(sink, 1, 2, [&] { return Configuration{states_of(b), tb}; });
    }
  };
  // Decodes the set bits of b into out, kUnroll slots at a time; out needs
  // kUnroll entries of slack.
  auto extract_rows = [](std::span<const Word> b, WordRange w, RowIndex* out) {
    std::size_t k = 0;
    for (std::uint32_t i = w.lo; i < w.hi; ++i) {
      Word x = b[i];
      const auto base = static_cast<RowIndex>(i * kWordBits);
      const auto bits = static_cast<std::size_t>(std::popcount(x));
      for (std::size_t u = 0; u < kUnroll; ++u) {
        out[k + u] = base + static_cast<RowIndex>(std::countr_zero(x));
        x &= x - 1;
      }
      if (bits > kUnroll) [[unlikely]] {
        k += kUnroll;
        for (; x != 0; x &= x - 1) out[k++] = base + static_cast<RowIndex>(std::countr_zero(x));
      } else {
        k += bits;
      }
    }
    return k;
  };

  std::size_t depth = 0;
  while (true) {
    const VarIndex var = order[depth];
    if (unclaimed[depth] == 0 || next_state[depth] == arities[depth]) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    const auto v = static_cast<State>(next_state[depth]++);

    Count support = 0;
    if (depth == 0) {
      support = state_count(var, v);
      current[0] = bitmap(var, v);
      range[0] = bitmap_range(var, v);
    } else {
      const WordRange w = intersect(range[depth - 1], bitmap_range(var, v));
      if (w.size() == 0) continue;
      const auto out = scratch_at(depth);
      support = and_into(current[depth - 1].subspan(w.lo, w.size()),
                         bitmap(var, v).subspan(w.lo, w.size()), out.subspan(w.lo, w.size()));
      current[depth] = out;
      range[depth] = trim(out, w);
    }
    if (support == 0) continue;
    unclaimed[depth] -= support;
    visited_state[depth] = v;

    if (support <= sparse_limit_) {
      const std::size_t next = depth + 1;
      RowIndex* out = buffers[next % 2].get() + cursor;
      const auto size = static_cast<RowIndex>(extract_rows(current[depth], range[depth], out));
      if (size == 1) {
        emit_single(out[0]);
      } else if (size == 2) {
        finish_pair(out[0], out[1], next);
      } else {
        entries.push_back({{cursor, cursor + size}, static_cast<std::uint32_t>(next)});
        cursor += size;
      }
    } else if (depth + 1 == depth_count) {
      emit_leaf(current[depth], range[depth], support, q.target, sink, configuration_states());
    } else {
      ++depth;
      next_state[depth] = 0;
      unclaimed[depth] = support;
    }
  }

  // Entries grouped by depth.
  std::vector<std::size_t> first_entry(depth_count + 2, 0);
  for (const Entry& e : entries) ++first_entry[e.depth + 1];
  for (std::size_t d = 0; d <= depth_count; ++d) first_entry[d + 1] += first_entry[d];
  std::vector<detail::RowRange> by_depth(entries.size());
  {
    std::vector<std::size_t> fill(first_entry.begin(), first_entry.end() - 1);
    for (const Entry& e : entries) by_depth[fill[e.depth]++] = e.rows;
  }

  // Level-wise refinement as in RadixEngine. Groups are disjoint, plus one
  // slot for the speculative write in split_range.
  const std::size_t capacity = m + 1;
  auto parts = std::make_unique_for_overwrite<detail::RowRange[]>(capacity);
  auto next_parts = std::make_unique_for_overwrite<detail::RowRange[]>(capacity);
  std::size_t part_count = 0;
  std::vector<RowIndex> offset;
  auto keys = std::make_unique_for_overwrite<State[]>(m);
  for (std::size_t d = 1; d <= depth_count; ++d) {
    for (std::size_t e = first_entry[d]; e < first_entry[d + 1]; ++e) parts[part_count++] = by_depth[e];
    if (d == depth_count) break;
    const RowIndex* src = buffers[d % 2].get();
    RowIndex* dst = buffers[(d + 1) % 2].get();
    const Arity r = arities[d];
    offset.resize(r + 1);
    std::size_t next_count = 0;
    for (std::size_t pi = 0; pi < part_count; ++pi) {
      const detail::RowRange p = parts[pi];
      const RowIndex size = p.end - p.begin;
      if (size <= 2) {
        if (size == 1) {
          emit_single(src[p.begin]);
        } else {
          finish_pair(src[p.begin], src[p.begin + 1], d);
        }
        continue;
      }
      next_count += detail::split_range(columns[d], r, src, dst, p, offset.data(), &next_parts[next_count], keys.get());
    }
    parts.swap(next_parts);
    part_count = next_count;
  }

  std::vector<Count> target_counts(target_arity, 0);
  const RowIndex* rows = buffers[depth_count % 2].get();
  for (std::size_t pi = 0; pi < part_count; ++pi) {
    const detail::RowRange p = parts[pi];
    const Count nij = p.end - p.begin;
    for (RowIndex i = p.begin; i < p.end; ++i) ++target_counts[target_col[rows[i]]];
    for (Arity k = 0; k < target_arity; ++k) {
      const Count nijk = target_counts[k];
      if (nijk == 0) continue;
      target_counts[k] = 0;
      detail::emit(sink, nijk, nij, [&] {
        return Configuration{states_of(rows[p.begin]), static_cast<State>(k)};
      });
    }
  }
}

}  // namespace tally
