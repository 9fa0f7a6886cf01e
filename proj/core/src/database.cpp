#include "tally/database.hpp"

#include <algorithm>
#include <mutex>
#include <string>

#include "tally/rng.hpp"

namespace tally {

struct Database::Storage {
  std::vector<Arity> arities;
  std::vector<std::vector<State>> columns;
  std::size_t rows = 0;

  mutable std::once_flag row_major_once;
  mutable std::vector<State> row_major;
};

Database::Database(std::vector<Arity> arities, std::vector<std::vector<State>> columns)
    : storage_(std::make_shared<Storage>()) {
  if (arities.size() != columns.size()) {
    throw LoadError("arity count " + std::to_string(arities.size()) +
                    " does not match column count " + std::to_string(columns.size()));
  }
  if (columns.empty()) throw LoadError("database has no variables");
  const std::size_t m = columns.front().size();
  if (m == 0) throw LoadError("database has no rows");
  if (m > std::size_t{0xffffffffu}) throw LoadError("too many rows for 32-bit row indexes");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (arities[i] == 0 || arities[i] > kMaxArity) {
      throw LoadError("variable " + std::to_string(i) + " has invalid arity " +
                      std::to_string(arities[i]));
    }
    if (columns[i].size() != m) {
      throw LoadError("column " + std::to_string(i) + " has " +
                      std::to_string(columns[i].size()) + " entries, expected " +
                      std::to_string(m));
    }
    const auto top = *std::max_element(columns[i].begin(), columns[i].end());
    if (top >= arities[i]) {
      throw LoadError("column " + std::to_string(i) + " holds state " + std::to_string(top) +
                      " but arity is " + std::to_string(arities[i]));
    }
  }
  storage_->arities = std::move(arities);
  storage_->columns = std::move(columns);
  storage_->rows = m;
}

std::size_t Database::num_variables() const noexcept { return storage_->columns.size(); }
std::size_t Database::num_rows() const noexcept { return storage_->rows; }
std::span<const Arity> Database::arities() const noexcept { return storage_->arities; }

std::span<const State> Database::column(VarIndex var) const {
  return storage_->columns[var];
}

std::span<const State> Database::row_major() const {
  const Storage& s = *storage_;
  std::call_once(s.row_major_once, [&s] {
    const std::size_t n = s.columns.size();
    s.row_major.resize(n * s.rows);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& col = s.columns[i];
      for (std::size_t r = 0; r < s.rows; ++r) s.row_major[r * n + i] = col[r];
    }
  });
  return s.row_major;
}

Count Database::state_count(VarIndex var, State state) const {
  const auto col = column(var);
  return static_cast<Count>(std::count(col.begin(), col.end(), state));
}

bool operator==(const Database& a, const Database& b) {
  if (a.storage_ == b.storage_) return true;
  return a.storage_->arities == b.storage_->arities && a.storage_->columns == b.storage_->columns;
}

Database generate_synthetic(std::size_t n, std::size_t m, std::span<const Arity> arities,
                            std::uint64_t seed) {
  if (n == 0 || m == 0) throw InvalidArgument("synthetic database needs n >= 1 and m >= 1");
  if (arities.size() != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " arities, got " +
                          std::to_string(arities.size()));
  }
  std::vector<std::vector<State>> columns(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (arities[i] == 0) throw InvalidArgument("arity of variable " + std::to_string(i) + " is 0");
    SplitMix64 rng(seed, i);
    columns[i].resize(m);
    for (auto& cell : columns[i]) cell = static_cast<State>(rng.uniform(arities[i]));
  }
  return Database({arities.begin(), arities.end()}, std::move(columns));
}

Database generate_synthetic(std::size_t n, std::size_t m, Arity arity, std::uint64_t seed) {
  const std::vector<Arity> arities(n, arity);
  return generate_synthetic(n, m, arities, seed);
}

std::vector<Arity> draw_arities(std::size_t n, Arity lo, Arity hi, std::uint64_t seed) {
  if (lo == 0 || lo > hi) throw InvalidArgument("arity range must satisfy 1 <= lo <= hi");
  SplitMix64 rng(seed, n + 1);
  std::vector<Arity> out(n);
  for (auto& a : out) a = lo + static_cast<Arity>(rng.uniform(hi - lo + 1));
  return out;
}

}  // namespace tally
