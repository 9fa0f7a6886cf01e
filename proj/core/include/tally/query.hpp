#pragma once

#include <compare>
#include <concepts>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tally/database.hpp"
#include "tally/types.hpp"

namespace tally {

/// One shared-context query: every non-zero configuration of `parents`
/// together with each state of `target`.
struct QuerySpec {
  VarIndex target = 0;
  std::vector<VarIndex> parents;

  /// Throws InvalidArgument unless all indexes are < n, parents are distinct
  /// and the target is not among them.
  void validate(const Database& db) const;

  /// Product of parent arities as a double (never overflows).
  double parent_configurations(const Database& db) const;

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// Conjunctive point query: variables[t] == states[t] for all t.
struct Assignment {
  std::vector<VarIndex> variables;
  std::vector<State> states;

  void validate(const Database& db) const;
  std::size_t size() const noexcept { return variables.size(); }

  /// (variable, state) pairs sorted by variable.
  std::vector<std::pair<VarIndex, State>> sorted_pairs() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Identifies the configuration behind an emitted count. Parent states follow
/// the order of QuerySpec::parents, whatever order the strategy visited them in.
struct Configuration {
  std::span<const State> parent_states;
  State target_state = 0;
};

/// The streaming interface: receives (N_ijk, N_ij) once per non-zero
/// configuration. Strategies make no promise about emission order.
template <class F>
concept CountSink = requires(F& f, Count nijk, Count nij) { f(nijk, nij); };

/// A sink that also wants to know which configuration each count belongs to.
/// Strategies only reconstruct the configuration for sinks of this kind.
template <class F>
concept ConfigurationSink =
    requires(F& f, const Configuration& c, Count nijk, Count nij) { f(c, nijk, nij); };

template <class F>
concept Sink = CountSink<F> || ConfigurationSink<F>;

namespace detail {

template <class F, class MakeConfiguration>
inline void emit(F& sink, Count nijk, Count nij, MakeConfiguration&& make) {
  if constexpr (ConfigurationSink<F>) {
    sink(make(), nijk, nij);
  } else {
    sink(nijk, nij);
  }
}

}  // namespace detail

/// A fully identified count record, as produced by the oracle and the
/// RecordCollector aggregator.
struct Record {
  std::vector<State> parent_states;
  State target_state = 0;
  Count nijk = 0;
  Count nij = 0;

  friend auto operator<=>(const Record&, const Record&) = default;
};

std::string to_string(const QuerySpec& q);
std::string to_string(const Record& r);

}  // namespace tally
