#include "tally/strategy.hpp"

#include <algorithm>
#include <sstream>

#include "tally/bitmap.hpp"
#include "tally/hash_table.hpp"
#include "tally/radix.hpp"

namespace tally {
namespace {

template <class Engine, StrategyKind Kind>
class EngineStrategy final : public Strategy {
 public:
  template <class... Args>
  explicit EngineStrategy(Args&&... args) : engine_(std::forward<Args>(args)...) {}

  StrategyKind kind() const noexcept override { return Kind; }
  const Database& database() const noexcept override { return engine_.database(); }

  void query(const QuerySpec& q, NullSink& sink) const override { engine_.query(q, sink); }
  void query(const QuerySpec& q, LogLikelihood& sink) const override { engine_.query(q, sink); }
  void query(const QuerySpec& q, MdlScore& sink) const override { engine_.query(q, sink); }
  void query(const QuerySpec& q, RecordCollector& sink) const override { engine_.query(q, sink); }
  void query(const QuerySpec& q, const CountCallback& sink) const override {
    engine_.query(q, sink);
  }

  Count count(const Assignment& a) const override { return engine_.count(a); }

 private:
  Engine engine_;
};

}  // namespace

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::kBitmap: return "bitmap";
    case StrategyKind::kRadix: return "radix";
    case StrategyKind::kHash: return "hash";
    case StrategyKind::kAdtree: return "adtree";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
  for (const auto kind : kAllStrategies) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<StrategyKind> parse_strategy_list(std::string_view list) {
  if (list == "all") return {std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::vector<StrategyKind> out;
  std::istringstream in{std::string(list)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto kind = parse_strategy(item);
    if (!kind) throw InvalidArgument("unknown strategy '" + item + "'");
    if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
  }
  if (out.empty()) throw InvalidArgument("empty strategy list");
  return out;
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const Database& db,
                                        const StrategyOptions& options) {
  switch (kind) {
    case StrategyKind::kBitmap:
      return std::make_unique<EngineStrategy<BitmapIndex, StrategyKind::kBitmap>>(db);
    case StrategyKind::kRadix:
      return std::make_unique<EngineStrategy<RadixEngine, StrategyKind::kRadix>>(
          db, options.radix_cache_first_level);
    case StrategyKind::kHash:
      return std::make_unique<EngineStrategy<HashTableEngine, StrategyKind::kHash>>(db);
    case StrategyKind::kAdtree:
      return std::make_unique<EngineStrategy<AdTree, StrategyKind::kAdtree>>(db, options.adtree);
  }
  throw InvalidArgument("unknown strategy kind");
}

}  // namespace tally
