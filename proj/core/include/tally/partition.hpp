#pragma once

#include <cstddef>
#include <span>

#include "tally/database.hpp"

namespace tally::detail {

/// Half-open run [begin, end) of a row buffer.
struct RowRange {
  RowIndex begin;
  RowIndex end;
};

/// One counting-sort pass of MSD radix partitioning: moves src[p] into the
/// same positions of dst grouped by `col`, and writes the non-empty groups
/// to `out`, returning how many. `offset` needs r + 1 entries, `out` r and
/// `keys` one per row of p.
inline std::size_t split_range(std::span<const State> col, Arity r, const RowIndex* src,
                               RowIndex* dst, RowRange p, RowIndex* offset, RowRange* out,
                               State* keys) {
  for (Arity s = 0; s <= r; ++s) offset[s] = 0;
  const RowIndex size = p.end - p.begin;
  src += p.begin;
  for (RowIndex i = 0; i < size; ++i) {
    keys[i] = col[src[i]];
    ++offset[keys[i] + 1];
  }
  offset[0] = p.begin;
  std::size_t count = 0;
  for (Arity s = 0; s < r; ++s) {
    offset[s + 1] += offset[s];
    // Written unconditionally, kept only when non-empty.
    out[count] = {offset[s], offset[s + 1]};
    count += offset[s + 1] > offset[s];
  }
  for (RowIndex i = 0; i < size; ++i) dst[offset[keys[i]]++] = src[i];
  return count;
}

}  // namespace tally::detail
