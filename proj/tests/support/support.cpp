#include "support.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tally/oracle.hpp"
#include "tally/rng.hpp"

namespace tally::testing {

Database fixture() {
  // Rows as published, 1-based.
  const int rows[8][3] = {{1, 1, 1}, {1, 2, 1}, {2, 1, 2}, {2, 2, 1},
                          {3, 2, 1}, {3, 2, 1}, {3, 1, 2}, {2, 1, 1}};
  std::vector<std::vector<State>> columns(3);
  for (const auto& row : rows) {
    for (int v = 0; v < 3; ++v) columns[v].push_back(static_cast<State>(row[v] - 1));
  }
  return Database({3, 2, 2}, std::move(columns));
}

Database random_database(std::uint64_t seed, const SuiteBounds& bounds) {
  SplitMix64 rng(seed, 0xdb);
  const std::size_t n = 2 + rng.uniform(bounds.max_vars - 1);
  const std::size_t m = 1 + rng.uniform(bounds.max_rows);
  const bool skewed = seed % 3 == 0;
  std::vector<Arity> arities(n);
  std::vector<std::vector<State>> columns(n, std::vector<State>(m));
  for (std::size_t v = 0; v < n; ++v) {
    arities[v] = static_cast<Arity>(1 + rng.uniform(bounds.max_arity));
    for (auto& cell : columns[v]) {
      if (skewed) {
        // Geometric-ish: state 0 about half the time, 1 a quarter...
        State s = 0;
        while (s + 1u < arities[v] && rng.uniform(2) == 1) ++s;
        cell = s;
      } else {
        cell = static_cast<State>(rng.uniform(arities[v]));
      }
    }
  }
  return Database(std::move(arities), std::move(columns));
}

QuerySpec random_query(const Database& db, std::uint64_t seed) {
  SplitMix64 rng(seed, 0x9e);
  const std::size_t n = db.num_variables();
  std::vector<VarIndex> pool(n);
  std::iota(pool.begin(), pool.end(), VarIndex{0});
  const std::size_t parents = rng.uniform(n);
  for (std::size_t t = 0; t <= parents; ++t) std::swap(pool[t], pool[t + rng.uniform(n - t)]);
  return QuerySpec{pool[0], {pool.begin() + 1, pool.begin() + 1 + static_cast<std::ptrdiff_t>(parents)}};
}

std::vector<SuiteCase> random_suite(std::size_t count, std::uint64_t seed, const SuiteBounds& bounds) {
  std::vector<SuiteCase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = SplitMix64(seed, i).next();
    Database db = random_database(s, bounds);
    QuerySpec q = random_query(db, s + 1);
    out.push_back({std::move(db), std::move(q)});
  }
  return out;
}

Assignment random_assignment(const Database& db, std::uint64_t seed) {
  SplitMix64 rng(seed, 0xa5);
  const std::size_t n = db.num_variables();
  std::vector<VarIndex> pool(n);
  std::iota(pool.begin(), pool.end(), VarIndex{0});
  const std::size_t size = rng.uniform(n + 1);
  for (std::size_t t = 0; t < size; ++t) std::swap(pool[t], pool[t + rng.uniform(n - t)]);
  const auto row = static_cast<RowIndex>(rng.uniform(db.num_rows()));
  Assignment a;
  for (std::size_t t = 0; t < size; ++t) {
    const VarIndex v = pool[t];
    a.variables.push_back(v);
    a.states.push_back(rng.uniform(4) == 0 ? static_cast<State>(rng.uniform(db.arity(v)))
                                           : db.at(row, v));
  }
  return a;
}

Database copy_database(std::size_t n, std::size_t m, std::uint64_t seed) {
  Database base = generate_synthetic(n, m, Arity{2}, seed);
  std::vector<std::vector<State>> columns;
  for (std::size_t v = 0; v < n; ++v) {
    const auto col = base.column(static_cast<VarIndex>(v));
    columns.emplace_back(col.begin(), col.end());
  }
  columns[1] = columns[0];
  return Database(std::vector<Arity>(n, 2), std::move(columns));
}

std::vector<Record> collect(const Strategy& s, const QuerySpec& q) {
  RecordCollector c;
  s.query(q, c);
  return c.records();
}

double direct_log_likelihood(const std::vector<Record>& records) {
  long double sum = 0;
  for (const auto& r : records) {
    sum += static_cast<long double>(r.nijk) *
           std::log(static_cast<long double>(r.nijk) / static_cast<long double>(r.nij));
  }
  return static_cast<double>(sum);
}

std::string mass_violation(const std::vector<Record>& records, Count m) {
  Count total = 0;
  std::map<std::vector<State>, std::pair<Count, Count>> per_config;
  for (const auto& r : records) {
    if (r.nijk == 0) return "zero count emitted: " + to_string(r);
    if (r.nijk > r.nij) return "N_ijk > N_ij: " + to_string(r);
    total += r.nijk;
    auto [it, fresh] = per_config.try_emplace(r.parent_states, 0, r.nij);
    if (!fresh && it->second.second != r.nij) return "inconsistent N_ij: " + to_string(r);
    it->second.first += r.nijk;
  }
  if (total != m) {
    std::ostringstream out;
    out << "sum N_ijk = " << total << ", expected m = " << m;
    return out.str();
  }
  for (const auto& [config, sums] : per_config) {
    if (sums.first != sums.second) return "sum_k N_ijk != N_ij for a configuration";
  }
  return {};
}

OracleParentSet oracle_best_parents(const Database& db, VarIndex target, std::size_t max_parents) {
  std::vector<VarIndex> pool;
  for (std::size_t v = 0; v < db.num_variables(); ++v) {
    if (v != target) pool.push_back(static_cast<VarIndex>(v));
  }
  const double log_m = std::log(static_cast<double>(db.num_rows()));
  OracleParentSet best;
  bool have = false;
  // Plain bitmask enumeration, independent of the level-wise walk.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
    std::vector<VarIndex> parents;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (mask >> b & 1U) parents.push_back(pool[b]);
    }
    if (parents.size() > max_parents) continue;
    double q = 1.0;
    for (const VarIndex p : parents) q *= db.arity(p);
    const double score = -direct_log_likelihood(oracle_query(db, QuerySpec{target, parents})) +
                         log_m / 2.0 * (db.arity(target) - 1.0) * q;
    if (!have || score < best.score || (score == best.score && parents < best.parents)) {
      best = {parents, score};
      have = true;
    }
  }
  return best;
}

std::vector<AssociationRule> brute_force_rules(const Database& db, const MiningOptions& options) {
  const std::size_t n = db.num_variables();
  const std::size_t m = db.num_rows();
  auto support_of = [&](std::uint64_t mask) {
    Count c = 0;
    for (std::size_t r = 0; r < m; ++r) {
      bool all = true;
      for (std::size_t v = 0; v < n && all; ++v) {
        if (mask >> v & 1U) all = db.at(static_cast<RowIndex>(r), static_cast<VarIndex>(v)) == 1;
      }
      c += all ? 1 : 0;
    }
    return c;
  };
  auto ratio_ok = [](Count num, Count den, double thr) {
    return den > 0 && static_cast<double>(num) / static_cast<double>(den) >= thr;
  };
  std::vector<AssociationRule> rules;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < 2 || size > options.max_size) continue;
    const Count joint = support_of(mask);
    if (!ratio_ok(joint, m, options.min_support)) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask >> c & 1U)) continue;
      const std::uint64_t ante = mask & ~(std::uint64_t{1} << c);
      const Count base = support_of(ante);
      if (!ratio_ok(joint, base, options.min_confidence)) continue;
      AssociationRule rule;
      for (std::size_t v = 0; v < n; ++v) {
        if (ante >> v & 1U) rule.antecedent.push_back(static_cast<VarIndex>(v));
      }
      rule.consequent = static_cast<VarIndex>(c);
      rule.itemset_count = joint;
      rule.antecedent_count = base;
      rule.support = static_cast<double>(joint) / static_cast<double>(m);
      rule.confidence = static_cast<double>(joint) / static_cast<double>(base);
      rules.push_back(std::move(rule));
    }
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

}  // namespace tally::testing
