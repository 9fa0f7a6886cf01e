#pragma once

#include <map>
#include <utility>
#include <vector>

#include "tally/database.hpp"
#include "tally/query.hpp"

namespace tally {

/// Consumes and discards counts; used to time strategies in isolation.
class NullSink {
 public:
  void operator()(Count, Count) noexcept { ++calls_; }
  Count result() const noexcept { return calls_; }

 private:
  Count calls_ = 0;
};

/// Sum of N_ijk * ln(N_ijk / N_ij) over the stream.
///
/// Terms are rounded to multiples of 2^-64 and summed as 128-bit integers,
/// so the result is bit-identical for every emission order. That makes
/// scores from different strategies exactly comparable.
class LogLikelihood {
 public:
  /// Throws ContractViolation unless 0 < nijk <= nij.
  void operator()(Count nijk, Count nij);
  double result() const noexcept;
  Count calls() const noexcept { return calls_; }

 private:
  __extension__ using Fixed = __int128;
  Fixed sum_ = 0;
  Count calls_ = 0;
};

/// MDL score -L + (ln m)/2 * (r_i - 1) * q_i, lower is better.
class MdlScore {
 public:
  MdlScore(Count m, Arity target_arity, double parent_configurations);
  static MdlScore for_query(const Database& db, const QuerySpec& q);

  void operator()(Count nijk, Count nij) { loglik_(nijk, nij); }

  double log_likelihood() const noexcept { return loglik_.result(); }
  double penalty() const noexcept { return penalty_; }
  double result() const noexcept { return -loglik_.result() + penalty_; }

 private:
  LogLikelihood loglik_;
  double penalty_;
};

/// Test instrument: keeps every record keyed by configuration, so the
/// collected set is independent of emission order. Emitting the same
/// (parent configuration, target state) twice throws ContractViolation.
class RecordCollector {
 public:
  void operator()(const Configuration& config, Count nijk, Count nij);

  /// Records sorted by (parent states, target state).
  std::vector<Record> records() const;
  std::size_t size() const noexcept { return records_.size(); }

 private:
  std::map<std::pair<std::vector<State>, State>, std::pair<Count, Count>> records_;
};

}  // namespace tally
