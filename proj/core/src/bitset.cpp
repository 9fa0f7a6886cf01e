#include "tally/bitset.hpp"

#include <algorithm>

namespace tally {

void Bitset::fill() noexcept {
  std::fill(words_.begin(), words_.end(), ~Word{0});
  if (const auto tail = bits_ % kWordBits; tail != 0 && !words_.empty()) {
    words_.back() = (Word{1} << tail) - 1;
  }
}

Count Bitset::count() const noexcept { return popcount(std::span<const Word>(words_)); }

}  // namespace tally
