#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "tally/types.hpp"

namespace tally {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept {
  return (bits + kWordBits - 1) / kWordBits;
}

namespace detail {

/// Branch-free SWAR population count.
constexpr int popcount_swar(Word x) noexcept {
  x = x - ((x >> 1) & 0x5555555555555555ULL);
  x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
  x = (x + (x >> 4)) & 0x0f0f0f0f0f0f0f0fULL;
  return static_cast<int>((x * 0x0101010101010101ULL) >> 56);
}

}  // namespace detail

constexpr int popcount(Word x) noexcept {
#if defined(TALLY_PORTABLE_POPCOUNT)
  return detail::popcount_swar(x);
#else
  return std::popcount(x);
#endif
}

/// Fixed-length bitset over m positions. Bits past size() are always zero, so
/// word-wise popcounts are exact.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_(words_for(bits), 0) {}

  std::size_t size() const noexcept { return bits_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  void set(std::size_t pos) noexcept { words_[pos / kWordBits] |= Word{1} << (pos % kWordBits); }
  bool test(std::size_t pos) const noexcept {
    return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
  }
  void fill() noexcept;
  Count count() const noexcept;

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<Word> words_;
};

/// |a|
inline Count popcount(std::span<const Word> a) noexcept {
  Count c = 0;
  for (const Word w : a) c += static_cast<Count>(popcount(w));
  return c;
}

/// |a & b| without materializing the intersection.
inline Count and_popcount(std::span<const Word> a, std::span<const Word> b) noexcept {
  const std::size_t n = a.size();
  Count c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    c0 += static_cast<Count>(popcount(a[i] & b[i]));
    c1 += static_cast<Count>(popcount(a[i + 1] & b[i + 1]));
    c2 += static_cast<Count>(popcount(a[i + 2] & b[i + 2]));
    c3 += static_cast<Count>(popcount(a[i + 3] & b[i + 3]));
  }
  for (; i < n; ++i) c0 += static_cast<Count>(popcount(a[i] & b[i]));
  return c0 + c1 + c2 + c3;
}

/// out = a & b, returning |out|.
inline Count and_into(std::span<const Word> a, std::span<const Word> b,
                      std::span<Word> out) noexcept {
  const std::size_t n = a.size();
  Count c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Word w0 = a[i] & b[i];
    const Word w1 = a[i + 1] & b[i + 1];
    const Word w2 = a[i + 2] & b[i + 2];
    const Word w3 = a[i + 3] & b[i + 3];
    out[i] = w0;
    out[i + 1] = w1;
    out[i + 2] = w2;
    out[i + 3] = w3;
    c0 += static_cast<Count>(popcount(w0));
    c1 += static_cast<Count>(popcount(w1));
    c2 += static_cast<Count>(popcount(w2));
    c3 += static_cast<Count>(popcount(w3));
  }
  for (; i < n; ++i) {
    out[i] = a[i] & b[i];
    c0 += static_cast<Count>(popcount(out[i]));
  }
  return c0 + c1 + c2 + c3;
}

}  // namespace tally
