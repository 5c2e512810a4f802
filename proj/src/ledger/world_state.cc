#include "edh/ledger/world_state.h"

#include "edh/common/encoding.h"
#include "edh/common/status.h"

namespace edh {

absl::Status WorldState::ApplyWrite(const WriteTransaction& tx,
                                    std::uint64_t height) {
  EDH_RETURN_IF_ERROR(ValidateWrite(tx));
  records_.push_back(CommittedWrite{tx, height});
  return absl::OkStatus();
}

void WorldState::RecordQuery(const QueryRecord& rec, double epsilon_rem) {
  if (!logged_ids_.insert(rec.response.query_id).second) return;
  latest_[rec.key] = query_log_.size();
  query_log_.push_back(rec);
  budget_snapshots_.push_back(epsilon_rem);
}

const QueryRecord* WorldState::FindLatest(const CategoryKey& key) const {
  auto it = latest_.find(key);
  return it == latest_.end() ? nullptr : &query_log_[it->second];
}

std::vector<std::uint8_t> WorldState::Serialize() const {
  CanonicalWriter w;
  w.PutU64(records_.size());
  for (const CommittedWrite& r : records_) {
    Encode(r.tx, w);
    w.PutU64(r.height);
  }
  w.PutU64(query_log_.size());
  for (std::size_t i = 0; i < query_log_.size(); ++i) {
    Encode(query_log_[i], w);
    w.PutDouble(budget_snapshots_[i]);
  }
  return w.Release();
}

}  // namespace edh
