#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tally/database.hpp"
#include "tally/query.hpp"

namespace tally {

struct AdTreeOptions {
  /// Nodes covering at most this many rows keep a leaf list of row indexes
  /// and are counted on demand.
  std::size_t leaf_threshold = 16;
  /// Build fails with AdtreeBuildError once AD + vary nodes exceed this.
  std::size_t node_cap = std::size_t{1} << 26;
};

/// Contingency table over ascending `vars`, stored sparsely as sorted
/// (mixed-radix key, count) pairs. The first variable is the most significant
/// digit. Only non-zero cells are present.
struct SparseTable {
  std::vector<VarIndex> vars;
  std::vector<std::pair<std::uint64_t, Count>> cells;
};

/// Sparse ADtree (Moore & Lee) with most-common-value elision and leaf lists.
///
/// An AD node covers the rows matching the assignments on its path and holds
/// one vary node per variable with a larger index than the one it branched
/// on. A vary node materializes a child only for non-MCV states with a
/// non-zero count; the MCV child is reconstructed by subtraction.
class AdTree {
 public:
  /// Eager build. Throws AdtreeBuildError when the node cap is exceeded.
  AdTree(Database db, AdTreeOptions options = {});

  const Database& database() const noexcept { return db_; }
  const AdTreeOptions& options() const noexcept { return options_; }

  Count count(const Assignment& a) const;

  /// Contingency table over `vars` (any order; the result is sorted by
  /// variable). Throws InvalidArgument if the joint state space does not fit
  /// 64-bit keys.
  SparseTable materialize(std::span<const VarIndex> vars) const;

  /// Materializes parents + target, then streams the non-zero records.
  template <Sink F>
  void query(const QuerySpec& q, F& sink) const;

  std::size_t ad_node_count() const noexcept { return ad_nodes_.size(); }
  std::size_t vary_node_count() const noexcept { return vary_nodes_.size(); }
  std::size_t leaf_list_count() const noexcept;
  Count root_count() const noexcept { return ad_nodes_.front().count; }
  bool root_is_leaf() const noexcept { return ad_nodes_.front().leaf; }
  /// Most common value of `var` among all rows, as stored at the root.
  State root_mcv(VarIndex var) const;

  /// Structural invariants; throws std::logic_error naming the first broken one.
  void check_invariants() const;

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct AdNode {
    Count count = 0;
    VarIndex first_var = 0;  // vary nodes cover first_var .. n-1
    std::uint32_t vary_begin = kNone;
    std::uint32_t leaf_begin = 0;
    bool leaf = false;
  };
  struct VaryNode {
    State mcv = 0;
    std::uint32_t child_begin = 0;  // arity(var) entries in children_
  };

  /// One cell of a contingency table regrouped by parent configuration.
  struct GroupedCell {
    std::uint64_t parent_key;
    State target_state;
    Count count;
  };

  std::uint32_t build(std::span<const RowIndex> rows, VarIndex first_var);
  void check_node_cap() const;
  Count count_at(std::uint32_t node, std::span<const std::pair<VarIndex, State>> rest) const;
  std::vector<std::pair<std::uint64_t, Count>> contab(std::uint32_t node,
                                                      std::span<const VarIndex> vars,
                                                      std::span<const std::uint64_t> strides) const;
  std::vector<GroupedCell> grouped_cells(const QuerySpec& q) const;
  void decode_parents(const QuerySpec& q, std::uint64_t key, std::span<State> out) const;

  Database db_;
  AdTreeOptions options_;
  std::vector<AdNode> ad_nodes_;
  std::vector<VaryNode> vary_nodes_;
  std::vector<std::uint32_t> children_;
  std::vector<RowIndex> leaf_rows_;
};

template <Sink F>
void AdTree::query(const QuerySpec& q, F& sink) const {
  const std::vector<GroupedCell> cells = grouped_cells(q);
  std::vector<State> parent_states(q.parents.size());
  std::size_t begin = 0;
  while (begin < cells.size()) {
    std::size_t end = begin;
    Count nij = 0;
    while (end < cells.size() && cells[end].parent_key == cells[begin].parent_key) {
      nij += cells[end].count;
      ++end;
    }
    if constexpr (ConfigurationSink<F>) decode_parents(q, cells[begin].parent_key, parent_states);
    for (std::size_t c = begin; c < end; ++c) {
      detail::emit(sink, cells[c].count, nij, [&] {
        return Configuration{parent_states, cells[c].target_state};
      });
    }
    begin = end;
  }
}

}  // namespace tally
