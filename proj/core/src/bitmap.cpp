#include "tally/bitmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tally {

BitmapIndex::BitmapIndex(Database db, std::optional<std::size_t> sparse_limit) : db_(std::move(db)) {
  const std::size_t n = db_.num_variables();
  const std::size_t m = db_.num_rows();
  words_per_bitmap_ = words_for(m);
  sparse_limit_ = sparse_limit.value_or(std::max<std::size_t>(4 * words_per_bitmap_, 32));

  offsets_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + db_.arity(static_cast<VarIndex>(i));
  words_.assign(offsets_[n] * words_per_bitmap_, 0);
  ranges_.assign(offsets_[n], WordRange{});
  state_counts_.assign(offsets_[n], 0);
  entropy_.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto var = static_cast<VarIndex>(i);
    const auto col = db_.column(var);
    for (std::size_t p = 0; p < m; ++p) {
      const std::size_t b = offsets_[i] + col[p];
      words_[b * words_per_bitmap_ + p / kWordBits] |= Word{1} << (p % kWordBits);
      ++state_counts_[b];
    }
    double h = 0.0;
    for (std::size_t b = offsets_[i]; b < offsets_[i + 1]; ++b) {
      ranges_[b] = trim({words_.data() + b * words_per_bitmap_, words_per_bitmap_},
                        {0, static_cast<std::uint32_t>(words_per_bitmap_)});
      if (state_counts_[b] == 0) continue;
      const double prob = static_cast<double>(state_counts_[b]) / static_cast<double>(m);
      h -= prob * std::log(prob);
    }
    entropy_[i] = h;
  }

  std::vector<std::size_t> by_entropy(n);
  std::iota(by_entropy.begin(), by_entropy.end(), 0);
  std::stable_sort(by_entropy.begin(), by_entropy.end(),
                   [this](std::size_t a, std::size_t b) { return entropy_[a] < entropy_[b]; });
  rank_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) rank_[by_entropy[r]] = r;
}

std::vector<VarIndex> BitmapIndex::traversal_order(std::span<const VarIndex> parents) const {
  std::vector<VarIndex> order(parents.begin(), parents.end());
  std::sort(order.begin(), order.end(),
            [this](VarIndex a, VarIndex b) { return rank_[a] < rank_[b]; });
  return order;
}

Count BitmapIndex::count(const Assignment& a) const {
  a.validate(db_);
  if (a.size() == 0) return db_.num_rows();
  if (a.size() == 1) return state_count(a.variables[0], a.states[0]);

  WordRange w{0, static_cast<std::uint32_t>(words_per_bitmap_)};
  for (std::size_t t = 0; t < a.size(); ++t) w = intersect(w, bitmap_range(a.variables[t], a.states[t]));
  if (w.size() == 0) return 0;
  auto words = [&](std::size_t t) { return bitmap(a.variables[t], a.states[t]).subspan(w.lo, w.size()); };
  if (a.size() == 2) return and_popcount(words(0), words(1));

  std::vector<Word> acc(w.size());
  Count support = and_into(words(0), words(1), acc);
  for (std::size_t t = 2; t < a.size() && support > 0; ++t) support = and_into(acc, words(t), acc);
  return support;
}

}  // namespace tally
