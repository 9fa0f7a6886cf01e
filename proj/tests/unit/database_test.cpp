#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "tally/database.hpp"
#include "tally/rng.hpp"

namespace tally {
namespace {

Database parse(const std::string& text, CsvOptions options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options);
}

TEST(Database, FixtureShape) {
  const Database db = testing::fixture();
  EXPECT_EQ(db.num_variables(), 3u);
  EXPECT_EQ(db.num_rows(), 8u);
  EXPECT_EQ(db.arity(0), 3u);
  EXPECT_EQ(db.at(6, 0), 2);
  EXPECT_EQ(db.state_count(2, 0), 6u);
  EXPECT_EQ(db.state_count(2, 1), 2u);
}

TEST(Database, RowMajorMatchesColumns) {
  const Database db = testing::random_database(17);
  const auto rm = db.row_major();
  const std::size_t n = db.num_variables();
  ASSERT_EQ(rm.size(), n * db.num_rows());
  for (std::size_t r = 0; r < db.num_rows(); ++r) {
    for (std::size_t v = 0; v < n; ++v) {
      ASSERT_EQ(rm[r * n + v], db.at(static_cast<RowIndex>(r), static_cast<VarIndex>(v)));
    }
  }
}

TEST(Database, CopiesShareStorage) {
  const Database a = testing::fixture();
  const Database b = a;  // NOLINT
  EXPECT_EQ(a.column(0).data(), b.column(0).data());
  EXPECT_EQ(a, b);
}

TEST(Database, RejectsBadColumns) {
  EXPECT_THROW(Database({2, 2}, {{0, 1}, {0}}), LoadError);
  EXPECT_THROW(Database({2}, {{0, 2}}), LoadError);
  EXPECT_THROW(Database({2, 2}, {{0, 1}}), LoadError);
}

TEST(Csv, OneBasedTokensAreShifted) {
  const Database db = parse("1,1,1\n1,2,1\n2,1,2\n2,2,1\n3,2,1\n3,2,1\n3,1,2\n2,1,1\n");
  EXPECT_EQ(db, testing::fixture());
}

TEST(Csv, ZeroBasedWhitespace) {
  const Database db = parse("0 1\n\n2\t0\n");
  EXPECT_EQ(db.num_rows(), 2u);
  EXPECT_EQ(db.arity(0), 3u);
  EXPECT_EQ(db.arity(1), 2u);
  EXPECT_EQ(db.at(1, 0), 2);
}

TEST(Csv, ExplicitBaseOverridesDetection) {
  CsvOptions options;
  options.base = StateBase::kZero;
  const Database db = parse("1,1\n1,2\n", options);
  EXPECT_EQ(db.arity(0), 2u);
  EXPECT_EQ(db.at(0, 0), 1);

  options.base = StateBase::kOne;
  EXPECT_THROW(parse("0,1\n", options), LoadError);
}

TEST(Csv, DeclaredArities) {
  CsvOptions options;
  options.declared_arities = std::vector<Arity>{4, 2};
  const Database db = parse("0,1\n1,0\n", options);
  EXPECT_EQ(db.arity(0), 4u);
  options.declared_arities = std::vector<Arity>{1, 2};
  EXPECT_THROW(parse("0,1\n1,0\n", options), LoadError);
  options.declared_arities = std::vector<Arity>{2};
  EXPECT_THROW(parse("0,1\n1,0\n", options), LoadError);
}

TEST(Csv, Errors) {
  EXPECT_THROW(parse(""), LoadError);
  EXPECT_THROW(parse("\n\n"), LoadError);
  EXPECT_THROW(parse("0,1\n0\n"), LoadError);
  EXPECT_THROW(parse("0,x\n"), LoadError);
  EXPECT_THROW(parse("0,-1\n"), LoadError);
  EXPECT_THROW(parse("0,70000\n"), LoadError);
  try {
    parse("0,1\n0,1,1\n");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, RoundTrip) {
  const Database db = testing::random_database(5);
  for (const bool one_based : {false, true}) {
    std::ostringstream out;
    write_csv(db, out, ',', one_based);
    CsvOptions options;
    options.base = one_based ? StateBase::kOne : StateBase::kZero;
    options.declared_arities = std::vector<Arity>(db.arities().begin(), db.arities().end());
    EXPECT_EQ(parse(out.str(), options), db);
  }
}

TEST(Synthetic, DeterministicAndInRange) {
  const Database a = generate_synthetic(6, 300, Arity{3}, 42);
  const Database b = generate_synthetic(6, 300, Arity{3}, 42);
  const Database c = generate_synthetic(6, 300, Arity{3}, 43);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  for (VarIndex v = 0; v < 6; ++v) {
    for (State s = 0; s < 3; ++s) EXPECT_GT(a.state_count(v, s), 60u);
  }
}

TEST(Synthetic, ColumnsAreIndependentStreams) {
  // Column i depends only on (seed, i), not on how many columns precede it.
  const Database small = generate_synthetic(2, 100, Arity{4}, 9);
  const Database large = generate_synthetic(5, 100, Arity{4}, 9);
  for (VarIndex v = 0; v < 2; ++v) {
    EXPECT_TRUE(std::equal(small.column(v).begin(), small.column(v).end(), large.column(v).begin()));
  }
}

TEST(Synthetic, DrawArities) {
  const auto arities = draw_arities(200, 2, 6, 3);
  ASSERT_EQ(arities.size(), 200u);
  for (const Arity a : arities) {
    EXPECT_GE(a, 2u);
    EXPECT_LE(a, 6u);
  }
  EXPECT_EQ(*std::min_element(arities.begin(), arities.end()), 2u);
  EXPECT_EQ(*std::max_element(arities.begin(), arities.end()), 6u);
}

TEST(Rng, SplitMix64ReferenceSequence) {
  // Published reference outputs for seed 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(Rng, UniformBounds) {
  SplitMix64 rng(7);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[rng.uniform(5)];
  for (const int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(rng.uniform(1), 0u);
  EXPECT_EQ(rng.uniform(0), 0u);
}

}  // namespace
}  // namespace tally
