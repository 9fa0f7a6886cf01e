#include "tally/query.hpp"

#include <algorithm>
#include <sstream>

namespace tally {
namespace {

void check_variable(const Database& db, VarIndex v, const char* what) {
  if (v >= db.num_variables()) {
    throw InvalidArgument(std::string(what) + " index " + std::to_string(v) +
                          " out of range (n = " + std::to_string(db.num_variables()) + ")");
  }
}

void check_distinct(std::vector<VarIndex> vars, const char* what) {
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw InvalidArgument(std::string(what) + " contains a duplicate variable");
  }
}

}  // namespace

void QuerySpec::validate(const Database& db) const {
  check_variable(db, target, "target");
  for (auto p : parents) {
    check_variable(db, p, "parent");
    if (p == target) throw InvalidArgument("target " + std::to_string(target) + " is also a parent");
  }
  check_distinct(parents, "parent set");
}

double QuerySpec::parent_configurations(const Database& db) const {
  double q = 1.0;
  for (auto p : parents) q *= db.arity(p);
  return q;
}

void Assignment::validate(const Database& db) const {
  if (variables.size() != states.size()) {
    throw InvalidArgument("assignment has " + std::to_string(variables.size()) + " variables but " +
                          std::to_string(states.size()) + " states");
  }
  for (std::size_t t = 0; t < variables.size(); ++t) {
    check_variable(db, variables[t], "assignment variable");
    if (states[t] >= db.arity(variables[t])) {
      throw InvalidArgument("state " + std::to_string(states[t]) + " out of range for variable " +
                            std::to_string(variables[t]));
    }
  }
  check_distinct(variables, "assignment");
}

std::vector<std::pair<VarIndex, State>> Assignment::sorted_pairs() const {
  std::vector<std::pair<VarIndex, State>> out;
  out.reserve(variables.size());
  for (std::size_t t = 0; t < variables.size(); ++t) out.emplace_back(variables[t], states[t]);
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const QuerySpec& q) {
  std::ostringstream os;
  os << "Query(X" << q.target << ", {";
  for (std::size_t t = 0; t < q.parents.size(); ++t) os << (t ? "," : "") << 'X' << q.parents[t];
  os << "})";
  return os.str();
}

std::string to_string(const Record& r) {
  std::ostringstream os;
  os << "(j=(";
  for (std::size_t t = 0; t < r.parent_states.size(); ++t) os << (t ? "," : "") << r.parent_states[t];
  os << "), k=" << r.target_state << ", Nijk=" << r.nijk << ", Nij=" << r.nij << ')';
  return os.str();
}

}  // namespace tally
