#include "tally/mining.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tally {

using Clock = std::chrono::steady_clock;
using Itemset = std::vector<VarIndex>;

bool meets_threshold(Count num, Count den, double threshold) noexcept {
  return static_cast<double>(num) / static_cast<double>(den) >= threshold;
}

bool rule_order(const AssociationRule& a, const AssociationRule& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
  return a.consequent < b.consequent;
}

namespace {

/// Joins itemsets sharing all but their last item; drops candidates with an
/// infrequent subset.
std::vector<Itemset> next_candidates(const std::vector<Itemset>& frequent) {
  const std::set<Itemset> lookup(frequent.begin(), frequent.end());
  std::vector<Itemset> out;
  for (std::size_t a = 0; a < frequent.size(); ++a) {
    for (std::size_t b = a + 1; b < frequent.size(); ++b) {
      const Itemset& x = frequent[a];
      const Itemset& y = frequent[b];
      if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;
      Itemset candidate = x;
      candidate.push_back(y.back());
      bool closed = true;
      for (std::size_t drop = 0; drop + 2 < candidate.size() && closed; ++drop) {
        Itemset subset = candidate;
        subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
        closed = lookup.contains(subset);
      }
      if (closed) out.push_back(std::move(candidate));
    }
  }
  return out;
}

}  // namespace

MiningResult mine_rules(const Strategy& strategy, const MiningOptions& options) {
  const auto total_start = Clock::now();
  const Database& db = strategy.database();
  for (std::size_t v = 0; v < db.num_variables(); ++v) {
    if (db.arity(static_cast<VarIndex>(v)) != 2) {
      throw InvalidArgument("rule mining needs binary data; variable " + std::to_string(v) +
                            " has arity " + std::to_string(db.arity(static_cast<VarIndex>(v))));
    }
  }
  if (!(options.min_support > 0.0) || !(options.min_confidence > 0.0)) {
    throw InvalidArgument("support and confidence thresholds must be positive");
  }
  if (options.max_size < 2) throw InvalidArgument("max rule size must be at least 2");

  const Count m = db.num_rows();
  MiningResult result;
  std::map<Itemset, Count> support;

  auto count_itemset = [&](const Itemset& items) {
    Assignment a{items, std::vector<State>(items.size(), kItemPresent)};
    const auto start = Clock::now();
    const Count c = strategy.count(a);
    result.query_time += Clock::now() - start;
    ++result.count_queries;
    return c;
  };

  std::vector<Itemset> candidates;
  for (std::size_t v = 0; v < db.num_variables(); ++v) candidates.push_back({static_cast<VarIndex>(v)});

  for (std::size_t size = 1; size <= options.max_size && !candidates.empty(); ++size) {
    std::vector<Itemset> frequent;
    for (auto& items : candidates) {
      const Count c = count_itemset(items);
      if (!meets_threshold(c, m, options.min_support)) continue;
      support.emplace(items, c);
      frequent.push_back(std::move(items));
    }
    result.frequent_per_level.push_back(frequent.size());

    if (size >= 2) {
      for (const auto& items : frequent) {
        const Count joint = support.at(items);
        for (std::size_t c = 0; c < items.size(); ++c) {
          Itemset antecedent = items;
          antecedent.erase(antecedent.begin() + static_cast<std::ptrdiff_t>(c));
          const Count base = support.at(antecedent);
          if (!meets_threshold(joint, base, options.min_confidence)) continue;
          result.rules.push_back(AssociationRule{
              antecedent, items[c], joint, base,
              static_cast<double>(joint) / static_cast<double>(m),
              static_cast<double>(joint) / static_cast<double>(base)});
        }
      }
    }
    if (size == options.max_size) break;
    candidates = next_candidates(frequent);
  }

  std::sort(result.rules.begin(), result.rules.end(), rule_order);
  result.total_time = Clock::now() - total_start;
  return result;
}

}  // namespace tally
