#include <gtest/gtest.h>

#include "support.hpp"
#include "tally/hash_table.hpp"
#include "tally/oracle.hpp"

namespace tally {
namespace {

TEST(ContingencyDictionary, FixtureTable) {
  const Database db = testing::fixture();
  const auto dict = ContingencyDictionary::build(db, QuerySpec{1, {0, 2}});
  EXPECT_TRUE(dict.mixed_radix_keys());
  EXPECT_EQ(dict.size(), 5u);
  EXPECT_EQ(dict.target_arity(), 2u);
  EXPECT_EQ(dict.total(), 8u);
}

TEST(ContingencyDictionary, EncodingsAgree) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Database db = testing::random_database(seed);
    const QuerySpec q = testing::random_query(db, seed);
    const auto radix = ContingencyDictionary::build(db, q, KeyEncoding::kMixedRadix);
    const auto bytes = ContingencyDictionary::build(db, q, KeyEncoding::kBytes);
    EXPECT_FALSE(bytes.mixed_radix_keys());
    ASSERT_EQ(radix.size(), bytes.size());
    EXPECT_EQ(radix.total(), db.num_rows());
    EXPECT_EQ(bytes.total(), db.num_rows());
    for (const KeyEncoding enc : {KeyEncoding::kMixedRadix, KeyEncoding::kBytes}) {
      RecordCollector c;
      HashTableEngine(db, enc).query(q, c);
      EXPECT_EQ(c.records(), oracle_query(db, q)) << to_string(q);
    }
  }
}

TEST(ContingencyDictionary, WideKeysFallBackToBytes) {
  // 20 parents of arity 16: 2^80 configurations, too many for 64-bit keys.
  const std::size_t n = 21;
  const Database db = generate_synthetic(n, 50, Arity{16}, 3);
  QuerySpec q{0, {}};
  for (VarIndex v = 1; v < n; ++v) q.parents.push_back(v);
  const auto dict = ContingencyDictionary::build(db, q);
  EXPECT_FALSE(dict.mixed_radix_keys());
  EXPECT_EQ(dict.total(), 50u);
  EXPECT_THROW(ContingencyDictionary::build(db, q, KeyEncoding::kMixedRadix), InvalidArgument);
  RecordCollector c;
  HashTableEngine(db).query(q, c);
  EXPECT_EQ(c.records(), oracle_query(db, q));
}

TEST(HashTable, PointQueries) {
  const HashTableEngine engine(testing::fixture());
  EXPECT_EQ(engine.count(Assignment{{0, 1, 2}, {2, 1, 0}}), 2u);
  EXPECT_EQ(engine.count(Assignment{}), 8u);
}

}  // namespace
}  // namespace tally
