#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tally/adtree.hpp"
#include "tally/aggregators.hpp"
#include "tally/database.hpp"
#include "tally/query.hpp"

namespace tally {

enum class StrategyKind { kBitmap, kRadix, kHash, kAdtree };

inline constexpr StrategyKind kAllStrategies[] = {StrategyKind::kBitmap, StrategyKind::kRadix,
                                                  StrategyKind::kHash, StrategyKind::kAdtree};

std::string_view to_string(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;
/// "all" or a comma-separated subset; throws InvalidArgument on unknown names.
std::vector<StrategyKind> parse_strategy_list(std::string_view list);

struct StrategyOptions {
  AdTreeOptions adtree;
  bool radix_cache_first_level = false;
};

using CountCallback = std::function<void(Count nijk, Count nij)>;

/// Runtime-selectable counting strategy. Queries through this interface
/// dispatch once per query to the templated engine, so per-record calls are
/// not virtual for the built-in aggregators.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual StrategyKind kind() const noexcept = 0;
  std::string_view name() const noexcept { return to_string(kind()); }
  virtual const Database& database() const noexcept = 0;

  virtual void query(const QuerySpec& q, NullSink& sink) const = 0;
  virtual void query(const QuerySpec& q, LogLikelihood& sink) const = 0;
  virtual void query(const QuerySpec& q, MdlScore& sink) const = 0;
  virtual void query(const QuerySpec& q, RecordCollector& sink) const = 0;
  virtual void query(const QuerySpec& q, const CountCallback& sink) const = 0;

  /// Point query.
  virtual Count count(const Assignment& a) const = 0;
};

/// Builds the index behind `kind`. The ADtree variant may throw AdtreeBuildError.
std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const Database& db,
                                        const StrategyOptions& options = {});

}  // namespace tally
