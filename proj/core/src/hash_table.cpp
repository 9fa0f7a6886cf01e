#include "tally/hash_table.hpp"

#include <numeric>
#include <string>
#include <unordered_map>

namespace tally {
namespace {

bool fits_mixed_radix(const Database& db, std::span<const VarIndex> parents) {
  std::uint64_t space = 1;
  for (const auto p : parents) {
    if (__builtin_mul_overflow(space, std::uint64_t{db.arity(p)}, &space)) return false;
  }
  return true;
}

}  // namespace

ContingencyDictionary ContingencyDictionary::build(const Database& db, const QuerySpec& q,
                                                   KeyEncoding encoding) {
  q.validate(db);
  ContingencyDictionary dict;
  dict.target_arity_ = db.arity(q.target);
  dict.width_ = q.parents.size();
  dict.mixed_radix_ = encoding == KeyEncoding::kMixedRadix ||
                      (encoding == KeyEncoding::kAuto && fits_mixed_radix(db, q.parents));
  if (dict.mixed_radix_ && !fits_mixed_radix(db, q.parents)) {
    throw InvalidArgument("parent state space does not fit a 64-bit mixed-radix key");
  }

  const std::size_t n = db.num_variables();
  const std::size_t m = db.num_rows();
  const auto cells = db.row_major();
  const std::size_t r = dict.target_arity_;

  auto insert = [&](auto& map, auto&& key, const State* row) {
    const auto [it, inserted] = map.try_emplace(std::move(key), static_cast<std::uint32_t>(map.size()));
    if (inserted) {
      dict.counts_.resize(dict.counts_.size() + r, 0);
      for (const auto p : q.parents) dict.configs_.push_back(row[p]);
    }
    ++dict.counts_[it->second * r + row[q.target]];
  };

  if (dict.mixed_radix_) {
    std::unordered_map<std::uint64_t, std::uint32_t> map;
    for (std::size_t row = 0; row < m; ++row) {
      const State* cells_row = cells.data() + row * n;
      std::uint64_t key = 0;
      for (const auto p : q.parents) key = key * db.arity(p) + cells_row[p];
      insert(map, key, cells_row);
    }
  } else {
    std::unordered_map<std::string, std::uint32_t> map;
    std::string key;
    for (std::size_t row = 0; row < m; ++row) {
      const State* cells_row = cells.data() + row * n;
      key.clear();
      for (const auto p : q.parents) {
        key.push_back(static_cast<char>(cells_row[p] & 0xff));
        key.push_back(static_cast<char>(cells_row[p] >> 8));
      }
      insert(map, std::string(key), cells_row);
    }
  }
  return dict;
}

Count ContingencyDictionary::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

Count HashTableEngine::count(const Assignment& a) const {
  a.validate(db_);
  const std::size_t n = db_.num_variables();
  const auto cells = db_.row_major();
  Count count = 0;
  for (std::size_t row = 0; row < db_.num_rows(); ++row) {
    const State* cells_row = cells.data() + row * n;
    bool match = true;
    for (std::size_t t = 0; t < a.size() && match; ++t) {
      match = cells_row[a.variables[t]] == a.states[t];
    }
    count += match ? 1 : 0;
  }
  return count;
}

}  // namespace tally
