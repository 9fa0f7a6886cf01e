#include "tally/oracle.hpp"

#include <set>

namespace tally {

std::vector<Record> oracle_query(const Database& db, const QuerySpec& q) {
  q.validate(db);
  const std::size_t m = db.num_rows();

  auto parent_states_of = [&](std::size_t row) {
    std::vector<State> states;
    states.reserve(q.parents.size());
    for (auto p : q.parents) states.push_back(db.at(static_cast<RowIndex>(row), p));
    return states;
  };

  std::set<std::pair<std::vector<State>, State>> observed;
  for (std::size_t r = 0; r < m; ++r) {
    observed.emplace(parent_states_of(r), db.at(static_cast<RowIndex>(r), q.target));
  }

  std::vector<Record> records;
  records.reserve(observed.size());
  for (const auto& [config, k] : observed) {
    Count nij = 0;
    Count nijk = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (parent_states_of(r) != config) continue;
      ++nij;
      if (db.at(static_cast<RowIndex>(r), q.target) == k) ++nijk;
    }
    records.push_back(Record{config, k, nijk, nij});
  }
  return records;
}

Count oracle_count(const Database& db, const Assignment& a) {
  a.validate(db);
  Count count = 0;
  for (std::size_t r = 0; r < db.num_rows(); ++r) {
    bool match = true;
    for (std::size_t t = 0; t < a.size() && match; ++t) {
      match = db.at(static_cast<RowIndex>(r), a.variables[t]) == a.states[t];
    }
    if (match) ++count;
  }
  return count;
}

}  // namespace tally
