#pragma once

#include <span>
#include <vector>

#include "tally/database.hpp"
#include "tally/query.hpp"

namespace tally {

enum class KeyEncoding {
  kAuto,      ///< mixed-radix 64-bit integer when the parent state space fits, else bytes
  kMixedRadix,
  kBytes,
};

/// Contingency table held as a hash dictionary: parent configuration ->
/// vector of r_i target-state counts. Only observed configurations are stored.
class ContingencyDictionary {
 public:
  /// Single scan over the row-major copy of db.
  static ContingencyDictionary build(const Database& db, const QuerySpec& q,
                                     KeyEncoding encoding = KeyEncoding::kAuto);

  /// Number of stored parent configurations.
  std::size_t size() const noexcept { return counts_.size() / target_arity_; }
  Arity target_arity() const noexcept { return target_arity_; }
  bool mixed_radix_keys() const noexcept { return mixed_radix_; }

  std::span<const Count> counts(std::size_t slot) const noexcept {
    return {counts_.data() + slot * target_arity_, target_arity_};
  }
  /// Parent states of the slot, in QuerySpec order.
  std::span<const State> configuration(std::size_t slot) const noexcept {
    return {configs_.data() + slot * width_, width_};
  }
  Count total() const noexcept;

 private:
  Arity target_arity_ = 1;
  std::size_t width_ = 0;
  bool mixed_radix_ = true;
  std::vector<Count> counts_;
  std::vector<State> configs_;
};

/// Hash-table baseline: builds a ContingencyDictionary per query, then walks it.
class HashTableEngine {
 public:
  explicit HashTableEngine(Database db, KeyEncoding encoding = KeyEncoding::kAuto)
      : db_(std::move(db)), encoding_(encoding) {}

  const Database& database() const noexcept { return db_; }

  template <Sink F>
  void query(const QuerySpec& q, F& sink) const;

  /// Point query by direct scan of the row-major data.
  Count count(const Assignment& a) const;

 private:
  Database db_;
  KeyEncoding encoding_;
};

template <Sink F>
void HashTableEngine::query(const QuerySpec& q, F& sink) const {
  const auto dict = ContingencyDictionary::build(db_, q, encoding_);
  for (std::size_t slot = 0; slot < dict.size(); ++slot) {
    const auto counts = dict.counts(slot);
    Count nij = 0;
    for (const Count c : counts) nij += c;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      detail::emit(sink, counts[k], nij, [&] {
        return Configuration{dict.configuration(slot), static_cast<State>(k)};
      });
    }
  }
}

}  // namespace tally
