#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tally/database.hpp"
#include "tally/mining.hpp"
#include "tally/query.hpp"
#include "tally/strategy.hpp"

namespace tally::testing {

/// The 8-row, 3-variable example database (arities 3, 2, 2), 0-based.
Database fixture();

/// One randomized (database, query) case.
struct SuiteCase {
  Database db;
  QuerySpec query;
};

struct SuiteBounds {
  std::size_t max_vars = 10;
  std::size_t max_rows = 512;
  Arity max_arity = 5;
};

/// Random small database: n in [2, max_vars], m in [1, max_rows], arities in
/// [1, max_arity]. Every third database is skewed so some states dominate.
Database random_database(std::uint64_t seed, const SuiteBounds& bounds = {});

/// Random query over db, |Pa| in [0, n-1].
QuerySpec random_query(const Database& db, std::uint64_t seed);

std::vector<SuiteCase> random_suite(std::size_t count, std::uint64_t seed,
                                    const SuiteBounds& bounds = {});

/// Random assignment of 0..n variables; states usually observed values,
/// sometimes any state of the domain.
Assignment random_assignment(const Database& db, std::uint64_t seed);

/// Binary database whose variable 1 copies variable 0; the rest are fair coins.
Database copy_database(std::size_t n, std::size_t m, std::uint64_t seed);

std::vector<Record> collect(const Strategy& s, const QuerySpec& q);

/// sum N_ijk ln(N_ijk / N_ij) evaluated directly in long double.
double direct_log_likelihood(const std::vector<Record>& records);

/// Empty string when the records satisfy the mass invariants, otherwise a
/// description of the first violation.
std::string mass_violation(const std::vector<Record>& records, Count m);

/// Exhaustive best MDL parent set, scored from oracle records. Ties go to the
/// lexicographically smallest set only when scores are exactly equal.
struct OracleParentSet {
  std::vector<VarIndex> parents;
  double score = 0.0;
};
OracleParentSet oracle_best_parents(const Database& db, VarIndex target, std::size_t max_parents);

/// Every rule from every itemset of size 2..max_size, by row scans.
std::vector<AssociationRule> brute_force_rules(const Database& db, const MiningOptions& options);

}  // namespace tally::testing
