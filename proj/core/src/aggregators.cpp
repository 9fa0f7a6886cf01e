#include "tally/aggregators.hpp"

#include <cmath>
#include <string>

namespace tally {
namespace {

constexpr double kFixedScale = 0x1.0p64;

void check_pair(Count nijk, Count nij) {
  if (nijk == 0 || nijk > nij) {
    throw ContractViolation("invalid count pair (Nijk=" + std::to_string(nijk) +
                            ", Nij=" + std::to_string(nij) + ")");
  }
}

}  // namespace

void LogLikelihood::operator()(Count nijk, Count nij) {
  check_pair(nijk, nij);
  ++calls_;
  if (nijk == nij) return;
  const double term =
      static_cast<double>(nijk) * std::log(static_cast<double>(nijk) / static_cast<double>(nij));
  sum_ += static_cast<Fixed>(std::nearbyint(term * kFixedScale));
}

double LogLikelihood::result() const noexcept { return static_cast<double>(sum_) / kFixedScale; }

MdlScore::MdlScore(Count m, Arity target_arity, double parent_configurations)
    : penalty_(std::log(static_cast<double>(m)) / 2.0 * (static_cast<double>(target_arity) - 1.0) *
               parent_configurations) {}

MdlScore MdlScore::for_query(const Database& db, const QuerySpec& q) {
  return MdlScore(db.num_rows(), db.arity(q.target), q.parent_configurations(db));
}

void RecordCollector::operator()(const Configuration& config, Count nijk, Count nij) {
  check_pair(nijk, nij);
  std::vector<State> key(config.parent_states.begin(), config.parent_states.end());
  const auto [it, inserted] =
      records_.try_emplace({std::move(key), config.target_state}, nijk, nij);
  if (!inserted) {
    throw ContractViolation("configuration emitted twice: " +
                            to_string(Record{it->first.first, it->first.second, nijk, nij}));
  }
}

std::vector<Record> RecordCollector::records() const {
  std::vector<Record> out;
  out.reserve(records_.size());
  for (const auto& [key, counts] : records_) {
    out.push_back(Record{key.first, key.second, counts.first, counts.second});
  }
  return out;
}

}  // namespace tally
