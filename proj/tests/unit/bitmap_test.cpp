#include <gtest/gtest.h>

#include "support.hpp"
#include "tally/bitmap.hpp"
#include "tally/oracle.hpp"
#include "tally/rng.hpp"

namespace tally {
namespace {

TEST(Bitset, SwarMatchesHardwarePopcount) {
  SplitMix64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Word w = rng.next() & rng.next();
    ASSERT_EQ(detail::popcount_swar(w), std::popcount(w));
  }
  EXPECT_EQ(detail::popcount_swar(0), 0);
  EXPECT_EQ(detail::popcount_swar(~Word{0}), 64);
}

TEST(Bitset, KernelsMatchBitLoops) {
  SplitMix64 rng(2);
  for (const std::size_t bits : {1u, 63u, 64u, 65u, 257u, 1000u}) {
    Bitset a(bits), b(bits);
    std::size_t both = 0, only_a = 0;
    for (std::size_t p = 0; p < bits; ++p) {
      const bool x = rng.uniform(2) == 1, y = rng.uniform(3) == 0;
      if (x) a.set(p);
      if (y) b.set(p);
      both += x && y;
      only_a += x;
    }
    EXPECT_EQ(a.count(), only_a);
    EXPECT_EQ(and_popcount(a.words(), b.words()), both);
    Bitset out(bits);
    EXPECT_EQ(and_into(a.words(), b.words(), out.words()), both);
    for (std::size_t p = 0; p < bits; ++p) ASSERT_EQ(out.test(p), a.test(p) && b.test(p));
  }
}

TEST(Bitset, FillKeepsTailClear) {
  Bitset a(70);
  a.fill();
  EXPECT_EQ(a.count(), 70u);
  EXPECT_EQ(a.words()[1], (Word{1} << 6) - 1);
}

TEST(Bitmap, FixtureBitmaps) {
  const BitmapIndex index(testing::fixture());
  EXPECT_EQ(popcount(index.bitmap(0, 2)), 3u);
  EXPECT_EQ(index.state_count(0, 2), 3u);
  EXPECT_EQ(index.bitmap(0, 2)[0], Word{0b01110000});
  EXPECT_EQ(index.words_per_bitmap(), 1u);
  EXPECT_EQ(index.memory_bits(), 7u * 64u);
}

TEST(Bitmap, EntropyOrdering) {
  const BitmapIndex index(testing::fixture());
  EXPECT_NEAR(index.entropy(0), 1.0821955300387671, 1e-12);
  EXPECT_NEAR(index.entropy(1), 0.6931471805599453, 1e-12);
  EXPECT_NEAR(index.entropy(2), 0.5623351446188083, 1e-12);
  EXPECT_LT(index.entropy(2), index.entropy(0));
  EXPECT_EQ(index.traversal_order(std::vector<VarIndex>{0, 1, 2}), (std::vector<VarIndex>{2, 1, 0}));
}

TEST(Bitmap, EntropyTiesBrokenByIndex) {
  // Columns 0 and 1 are identical, so their entropies tie.
  const Database db({2, 2, 2}, {{0, 1, 0, 1}, {0, 1, 0, 1}, {0, 0, 0, 1}});
  const BitmapIndex index(db);
  EXPECT_EQ(index.traversal_order(std::vector<VarIndex>{1, 0}), (std::vector<VarIndex>{0, 1}));
  EXPECT_EQ(index.traversal_order(std::vector<VarIndex>{1, 2, 0}), (std::vector<VarIndex>{2, 0, 1}));
}

TEST(Bitmap, FixtureQueryMatchesOracle) {
  const Database db = testing::fixture();
  const BitmapIndex index(db);
  for (const QuerySpec& q : {QuerySpec{0, {1, 2}}, QuerySpec{1, {0, 2}}, QuerySpec{2, {}},
                             QuerySpec{2, {1, 0}}}) {
    RecordCollector c;
    index.query(q, c);
    EXPECT_EQ(c.records(), oracle_query(db, q)) << to_string(q);
  }
}

TEST(Bitmap, PointQueries) {
  const BitmapIndex index(testing::fixture());
  EXPECT_EQ(index.count(Assignment{{0, 1, 2}, {2, 1, 0}}), 2u);
  EXPECT_EQ(index.count(Assignment{}), 8u);
  EXPECT_EQ(index.count(Assignment{{1}, {1}}), 4u);
}

TEST(Bitmap, RowsAcrossWordBoundaries) {
  for (const std::size_t m : {63u, 64u, 65u, 129u}) {
    const Database db = generate_synthetic(4, m, Arity{3}, m);
    const BitmapIndex index(db);
    const QuerySpec q{3, {0, 1, 2}};
    RecordCollector c;
    index.query(q, c);
    EXPECT_EQ(c.records(), oracle_query(db, q)) << "m=" << m;
  }
}

TEST(Bitmap, SubtractionForLastTargetState) {
  // Target with arity 4 where only the last state occurs.
  const Database db({2, 4}, {{0, 1, 1, 0, 1}, {3, 3, 3, 3, 3}});
  const BitmapIndex index(db);
  RecordCollector c;
  index.query(QuerySpec{1, {0}}, c);
  const std::vector<Record> expected = {{{0}, 3, 2, 2}, {{1}, 3, 3, 3}};
  EXPECT_EQ(c.records(), expected);
}

TEST(Bitmap, WordRangeTrim) {
  const std::vector<Word> w = {0, 0, 5, 0, 9, 0};
  const WordRange r = trim(w, {0, 6});
  EXPECT_EQ(r.lo, 2u);
  EXPECT_EQ(r.hi, 5u);
  EXPECT_EQ(trim(w, {0, 2}).size(), 0u);
  EXPECT_EQ(intersect(WordRange{0, 3}, WordRange{4, 6}).size(), 0u);
  const WordRange both = intersect(WordRange{1, 5}, WordRange{3, 8});
  EXPECT_EQ(both.lo, 3u);
  EXPECT_EQ(both.hi, 5u);
}

TEST(Bitmap, DefaultSparseLimit) {
  EXPECT_EQ(BitmapIndex(generate_synthetic(2, 100, Arity{2}, 1)).sparse_limit(), 32u);
  EXPECT_EQ(BitmapIndex(generate_synthetic(2, 6400, Arity{2}, 1)).sparse_limit(), 400u);
}

TEST(Bitmap, EverySparseLimitMatchesOracle) {
  const auto suite = testing::random_suite(120, 77);
  for (const std::size_t limit : {std::size_t{0}, std::size_t{1}, std::size_t{5}, std::size_t{64},
                                  std::size_t{1} << 20}) {
    for (const auto& c : suite) {
      const BitmapIndex index(c.db, limit);
      RecordCollector out;
      index.query(c.query, out);
      ASSERT_EQ(out.records(), oracle_query(c.db, c.query))
          << "limit=" << limit << " " << to_string(c.query);
    }
  }
}

TEST(Bitmap, WideTailFallsBackToGrouping) {
  // 21 parents of arity 16 need 84 bits of key.
  const Database db = generate_synthetic(22, 300, Arity{16}, 9);
  std::vector<VarIndex> parents(21);
  for (VarIndex i = 0; i < 21; ++i) parents[i] = i;
  const QuerySpec q{21, parents};
  for (const std::size_t limit : {std::size_t{0}, std::size_t{300}}) {
    const BitmapIndex index(db, limit);
    RecordCollector out;
    index.query(q, out);
    EXPECT_EQ(out.records(), oracle_query(db, q)) << "limit=" << limit;
  }
}

}  // namespace
}  // namespace tally
