#pragma once

#include <vector>

#include "tally/database.hpp"
#include "tally/query.hpp"

namespace tally {

/// Reference semantics for every strategy. For each distinct observed
/// (parent configuration, target state) pair it rescans all m rows to count
/// N_ij and N_ijk, so it is O(configurations * m) and obviously correct.
/// Records come back sorted.
std::vector<Record> oracle_query(const Database& db, const QuerySpec& q);

/// Rows matching every (variable, state) pair; m for an empty assignment.
Count oracle_count(const Database& db, const Assignment& a);

}  // namespace tally
