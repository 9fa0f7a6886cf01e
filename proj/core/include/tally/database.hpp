#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tally/types.hpp"

namespace tally {

/// Complete categorical database stored column-major.
///
/// Cells hold 0-based states. The column data is immutable and shared
/// between copies, so passing a Database by value is cheap and any number of
/// threads may read it concurrently.
class Database {
 public:
  /// Validates shape and ranges; throws LoadError when a column has the wrong
  /// length or holds a state >= its arity.
  Database(std::vector<Arity> arities, std::vector<std::vector<State>> columns);

  std::size_t num_variables() const noexcept;
  std::size_t num_rows() const noexcept;

  Arity arity(VarIndex var) const { return arities()[var]; }
  std::span<const Arity> arities() const noexcept;
  std::span<const State> column(VarIndex var) const;
  State at(RowIndex row, VarIndex var) const { return column(var)[row]; }

  /// Row-major copy of the cells (row r occupies [r*n, (r+1)*n)). Built on
  /// first use, thread-safe, and shared by every copy of this Database.
  std::span<const State> row_major() const;

  /// Number of rows holding `state` in column `var`.
  Count state_count(VarIndex var, State state) const;

  friend bool operator==(const Database& a, const Database& b);

 private:
  struct Storage;
  std::shared_ptr<Storage> storage_;
};

/// How external state tokens map onto 0-based states.
enum class StateBase {
  kAuto,  ///< subtract 1 when the smallest token in the file is 1
  kZero,
  kOne,
};

struct CsvOptions {
  /// std::nullopt sniffs the first data line: ',' if present, otherwise any
  /// run of whitespace separates tokens.
  std::optional<char> delimiter;
  /// Declared arities win over inferred ones but may never be smaller than
  /// the largest observed state + 1.
  std::optional<std::vector<Arity>> declared_arities;
  StateBase base = StateBase::kAuto;
};

Database parse_csv(std::istream& in, const CsvOptions& options = {});
Database load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Sidecar arity file: one integer per variable, separated by whitespace or commas.
std::vector<Arity> load_arities(const std::filesystem::path& path);

/// Writes 0-based (or 1-based when `one_based`) cells, one row per line.
void write_csv(const Database& db, std::ostream& out, char delimiter = ',',
               bool one_based = false);

/// Every cell drawn independently and uniformly from [0, arity). Column i uses
/// the SplitMix64 stream (seed, i), so output is identical across runs and
/// platforms for the same arguments.
Database generate_synthetic(std::size_t n, std::size_t m, std::span<const Arity> arities,
                            std::uint64_t seed);
Database generate_synthetic(std::size_t n, std::size_t m, Arity arity, std::uint64_t seed);

/// Arity per variable drawn uniformly from [lo, hi] (stream id n + 1 of `seed`).
std::vector<Arity> draw_arities(std::size_t n, Arity lo, Arity hi, std::uint64_t seed);

}  // namespace tally
