#include "tally/radix.hpp"

namespace tally {

std::vector<Partition> buckets(const Database& db, VarIndex var, std::span<const RowIndex> rows) {
  const auto col = db.column(var);
  std::vector<Partition> out(db.arity(var));
  for (const RowIndex row : rows) out[col[row]].push_back(row);
  return out;
}

RadixEngine::RadixEngine(Database db, bool cache_first_level) : db_(std::move(db)) {
  const std::size_t n = db_.num_variables();
  const std::size_t m = db_.num_rows();
  if (!cache_first_level) return;
  cached_rows_.resize(n * m);
  bound_offsets_.assign(n + 1, 0);
  std::vector<std::size_t> offset;
  for (std::size_t i = 0; i < n; ++i) {
    const auto var = static_cast<VarIndex>(i);
    const auto col = db_.column(var);
    const Arity r = db_.arity(var);
    offset.assign(r + 1, 0);
    for (const State s : col) ++offset[s + 1];
    for (Arity s = 0; s < r; ++s) offset[s + 1] += offset[s];
    cached_bounds_.push_back(0);
    for (Arity s = 0; s < r; ++s) {
      if (offset[s + 1] > offset[s]) cached_bounds_.push_back(offset[s + 1]);
    }
    bound_offsets_[i + 1] = cached_bounds_.size();
    RowIndex* out = cached_rows_.data() + i * m;
    for (std::size_t row = 0; row < m; ++row) out[offset[col[row]]++] = static_cast<RowIndex>(row);
  }
}

Count RadixEngine::count(const Assignment& a) const {
  a.validate(db_);
  const std::size_t m = db_.num_rows();
  if (a.size() == 0) return m;

  std::vector<RowIndex> rows;
  const VarIndex first = a.variables[0];
  const State first_state = a.states[0];
  if (caches_first_level()) {
    // The cached layout already isolates the matching partition.
    const auto all = cached_rows(first);
    const auto col = db_.column(first);
    const auto lo = std::partition_point(all.begin(), all.end(),
                                         [&](RowIndex r) { return col[r] < first_state; });
    const auto hi = std::partition_point(lo, all.end(),
                                         [&](RowIndex r) { return col[r] == first_state; });
    rows.assign(lo, hi);
  } else {
    const auto col = db_.column(first);
    for (std::size_t row = 0; row < m; ++row) {
      if (col[row] == first_state) rows.push_back(static_cast<RowIndex>(row));
    }
  }

  for (std::size_t t = 1; t < a.size() && !rows.empty(); ++t) {
    const auto col = db_.column(a.variables[t]);
    const State s = a.states[t];
    std::erase_if(rows, [&](RowIndex r) { return col[r] != s; });
  }
  return rows.size();
}

}  // namespace tally
