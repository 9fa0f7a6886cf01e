#include "tally/adtree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tally {
namespace {

using Cells = std::vector<std::pair<std::uint64_t, Count>>;

/// Sorts (key, 1)-style entries and merges equal keys.
void sort_and_merge(Cells& cells) {
  std::sort(cells.begin(), cells.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (out > 0 && cells[out - 1].first == cells[i].first) {
      cells[out - 1].second += cells[i].second;
    } else {
      cells[out++] = cells[i];
    }
  }
  cells.resize(out);
}

/// minuend -= subtrahend, both sorted; every subtrahend key must be present.
void subtract(Cells& minuend, const Cells& subtrahend) {
  std::size_t i = 0;
  for (const auto& [key, count] : subtrahend) {
    while (i < minuend.size() && minuend[i].first < key) ++i;
    if (i == minuend.size() || minuend[i].first != key || minuend[i].second < count) {
      throw std::logic_error("ADtree MCV reconstruction went negative");
    }
    minuend[i].second -= count;
  }
}

}  // namespace

AdTree::AdTree(Database db, AdTreeOptions options) : db_(std::move(db)), options_(options) {
  std::vector<RowIndex> all(db_.num_rows());
  std::iota(all.begin(), all.end(), RowIndex{0});
  build(all, 0);
}

void AdTree::check_node_cap() const {
  const std::size_t total = ad_nodes_.size() + vary_nodes_.size();
  if (total > options_.node_cap) throw AdtreeBuildError(total, options_.node_cap);
}

std::uint32_t AdTree::build(std::span<const RowIndex> rows, VarIndex first_var) {
  const auto id = static_cast<std::uint32_t>(ad_nodes_.size());
  ad_nodes_.push_back(AdNode{rows.size(), first_var, kNone, 0, false});
  check_node_cap();

  if (rows.size() <= options_.leaf_threshold) {
    ad_nodes_[id].leaf = true;
    ad_nodes_[id].leaf_begin = static_cast<std::uint32_t>(leaf_rows_.size());
    leaf_rows_.insert(leaf_rows_.end(), rows.begin(), rows.end());
    return id;
  }

  const std::size_t n = db_.num_variables();
  if (first_var >= n) return id;

  const auto vary_begin = static_cast<std::uint32_t>(vary_nodes_.size());
  vary_nodes_.resize(vary_nodes_.size() + (n - first_var));
  ad_nodes_[id].vary_begin = vary_begin;
  check_node_cap();

  std::vector<RowIndex> sorted(rows.size());
  std::vector<std::size_t> offset;
  for (std::size_t j = first_var; j < n; ++j) {
    const auto var = static_cast<VarIndex>(j);
    const auto col = db_.column(var);
    const Arity r = db_.arity(var);

    offset.assign(r + 1, 0);
    for (const RowIndex row : rows) ++offset[col[row] + 1];
    State mcv = 0;
    for (Arity s = 1; s < r; ++s) {
      if (offset[s + 1] > offset[mcv + 1]) mcv = static_cast<State>(s);
    }
    for (Arity s = 0; s < r; ++s) offset[s + 1] += offset[s];
    std::vector<std::size_t> start(offset.begin(), offset.end());
    for (const RowIndex row : rows) sorted[start[col[row]]++] = row;

    const auto child_begin = static_cast<std::uint32_t>(children_.size());
    children_.resize(children_.size() + r, kNone);
    vary_nodes_[vary_begin + (j - first_var)] = VaryNode{mcv, child_begin};

    for (Arity s = 0; s < r; ++s) {
      const std::size_t size = offset[s + 1] - offset[s];
      if (s == mcv || size == 0) continue;
      const std::uint32_t child =
          build(std::span<const RowIndex>(sorted).subspan(offset[s], size), var + 1);
      children_[child_begin + s] = child;
    }
  }
  return id;
}

std::size_t AdTree::leaf_list_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(ad_nodes_.begin(), ad_nodes_.end(), [](const AdNode& a) { return a.leaf; }));
}

State AdTree::root_mcv(VarIndex var) const {
  const AdNode& root = ad_nodes_.front();
  if (root.leaf || root.vary_begin == kNone) throw InvalidArgument("root has no vary nodes");
  return vary_nodes_[root.vary_begin + (var - root.first_var)].mcv;
}

Count AdTree::count(const Assignment& a) const {
  a.validate(db_);
  const auto pairs = a.sorted_pairs();
  return count_at(0, pairs);
}

Count AdTree::count_at(std::uint32_t node_id,
                       std::span<const std::pair<VarIndex, State>> rest) const {
  const AdNode& node = ad_nodes_[node_id];
  if (rest.empty()) return node.count;

  if (node.leaf) {
    Count c = 0;
    for (std::size_t i = 0; i < node.count; ++i) {
      const RowIndex row = leaf_rows_[node.leaf_begin + i];
      bool match = true;
      for (const auto& [var, state] : rest) {
        if (db_.at(row, var) != state) {
          match = false;
          break;
        }
      }
      c += match ? 1 : 0;
    }
    return c;
  }

  const auto [var, state] = rest.front();
  const auto tail = rest.subspan(1);
  const VaryNode& vary = vary_nodes_[node.vary_begin + (var - node.first_var)];
  if (state != vary.mcv) {
    const std::uint32_t child = children_[vary.child_begin + state];
    return child == kNone ? 0 : count_at(child, tail);
  }
  Count c = count_at(node_id, tail);
  const Arity r = db_.arity(var);
  for (Arity s = 0; s < r; ++s) {
    const std::uint32_t child = children_[vary.child_begin + s];
    if (child != kNone) c -= count_at(child, tail);
  }
  return c;
}

SparseTable AdTree::materialize(std::span<const VarIndex> vars) const {
  SparseTable table;
  table.vars.assign(vars.begin(), vars.end());
  std::sort(table.vars.begin(), table.vars.end());
  if (std::adjacent_find(table.vars.begin(), table.vars.end()) != table.vars.end()) {
    throw InvalidArgument("materialize: duplicate variable");
  }
  const std::size_t k = table.vars.size();
  std::vector<std::uint64_t> strides(k, 1);
  std::uint64_t space = 1;
  for (std::size_t t = k; t-- > 0;) {
    if (table.vars[t] >= db_.num_variables()) throw InvalidArgument("materialize: variable out of range");
    strides[t] = space;
    if (__builtin_mul_overflow(space, std::uint64_t{db_.arity(table.vars[t])}, &space)) {
      throw InvalidArgument("contingency table key space exceeds 64 bits");
    }
  }
  table.cells = contab(0, table.vars, strides);
  return table;
}

std::vector<std::pair<std::uint64_t, Count>> AdTree::contab(
    std::uint32_t node_id, std::span<const VarIndex> vars,
    std::span<const std::uint64_t> strides) const {
  const AdNode& node = ad_nodes_[node_id];
  if (vars.empty()) return {{0, node.count}};

  if (node.leaf) {
    Cells cells;
    cells.reserve(node.count);
    for (std::size_t i = 0; i < node.count; ++i) {
      const RowIndex row = leaf_rows_[node.leaf_begin + i];
      std::uint64_t key = 0;
      for (std::size_t t = 0; t < vars.size(); ++t) key += db_.at(row, vars[t]) * strides[t];
      cells.emplace_back(key, 1);
    }
    sort_and_merge(cells);
    return cells;
  }

  const VarIndex var = vars.front();
  const auto rest = vars.subspan(1);
  const auto rest_strides = strides.subspan(1);
  const VaryNode& vary = vary_nodes_[node.vary_begin + (var - node.first_var)];
  const Arity r = db_.arity(var);

  std::vector<Cells> per_state(r);
  per_state[vary.mcv] = contab(node_id, rest, rest_strides);
  for (Arity s = 0; s < r; ++s) {
    const std::uint32_t child = children_[vary.child_begin + s];
    if (s == vary.mcv || child == kNone) continue;
    per_state[s] = contab(child, rest, rest_strides);
    subtract(per_state[vary.mcv], per_state[s]);
  }

  Cells out;
  for (Arity s = 0; s < r; ++s) {
    const std::uint64_t prefix = s * strides.front();
    for (const auto& [key, count] : per_state[s]) {
      if (count > 0) out.emplace_back(prefix + key, count);
    }
  }
  return out;
}

std::vector<AdTree::GroupedCell> AdTree::grouped_cells(const QuerySpec& q) const {
  q.validate(db_);
  std::vector<VarIndex> vars = q.parents;
  vars.push_back(q.target);
  const SparseTable table = materialize(vars);

  const std::size_t k = table.vars.size();
  std::vector<std::uint64_t> strides(k, 1);
  for (std::size_t t = k - 1; t-- > 0;) strides[t] = strides[t + 1] * db_.arity(table.vars[t + 1]);

  // Position of each QuerySpec variable in the sorted table.
  auto position = [&](VarIndex v) {
    return static_cast<std::size_t>(std::lower_bound(table.vars.begin(), table.vars.end(), v) -
                                    table.vars.begin());
  };
  std::vector<std::size_t> parent_pos;
  for (const auto p : q.parents) parent_pos.push_back(position(p));
  const std::size_t target_pos = position(q.target);

  std::vector<GroupedCell> cells;
  cells.reserve(table.cells.size());
  for (const auto& [key, count] : table.cells) {
    auto state_at = [&](std::size_t pos) {
      return static_cast<State>((key / strides[pos]) % db_.arity(table.vars[pos]));
    };
    std::uint64_t parent_key = 0;
    for (std::size_t t = 0; t < q.parents.size(); ++t) {
      parent_key = parent_key * db_.arity(q.parents[t]) + state_at(parent_pos[t]);
    }
    cells.push_back(GroupedCell{parent_key, state_at(target_pos), count});
  }
  std::sort(cells.begin(), cells.end(), [](const GroupedCell& a, const GroupedCell& b) {
    return a.parent_key != b.parent_key ? a.parent_key < b.parent_key
                                        : a.target_state < b.target_state;
  });
  return cells;
}

void AdTree::decode_parents(const QuerySpec& q, std::uint64_t key, std::span<State> out) const {
  for (std::size_t t = q.parents.size(); t-- > 0;) {
    const Arity r = db_.arity(q.parents[t]);
    out[t] = static_cast<State>(key % r);
    key /= r;
  }
}

void AdTree::check_invariants() const {
  const std::size_t n = db_.num_variables();
  auto fail = [](const std::string& what) { throw std::logic_error("ADtree invariant: " + what); };

  if (ad_nodes_.front().count != db_.num_rows()) fail("root count differs from m");
  for (std::size_t id = 0; id < ad_nodes_.size(); ++id) {
    const AdNode& node = ad_nodes_[id];
    if ((node.count <= options_.leaf_threshold) != node.leaf) {
      fail("node " + std::to_string(id) + " leaf flag disagrees with threshold");
    }
    if (node.leaf || node.first_var >= n) continue;
    for (std::size_t j = node.first_var; j < n; ++j) {
      const VaryNode& vary = vary_nodes_[node.vary_begin + (j - node.first_var)];
      const Arity r = db_.arity(static_cast<VarIndex>(j));
      if (children_[vary.child_begin + vary.mcv] != kNone) fail("MCV child is materialized");
      Count explicit_sum = 0;
      Count largest_child = 0;
      for (Arity s = 0; s < r; ++s) {
        const std::uint32_t child = children_[vary.child_begin + s];
        if (child == kNone) continue;
        const AdNode& c = ad_nodes_[child];
        if (c.count == 0) fail("zero-count child is materialized");
        if (c.first_var != j + 1) fail("child does not branch past its vary variable");
        explicit_sum += c.count;
        largest_child = std::max(largest_child, c.count);
      }
      if (explicit_sum > node.count) fail("explicit children exceed parent count");
      if (node.count - explicit_sum < largest_child) fail("elided value is not the most common");
    }
  }
}

}  // namespace tally
