#ifndef EDH_LEDGER_WORLD_STATE_H_
#define EDH_LEDGER_WORLD_STATE_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "absl/status/status.h"
#include "edh/chaincode/query_record.h"
#include "edh/ledger/transaction.h"

namespace edh {

struct CommittedWrite {
  WriteTransaction tx;
  std::uint64_t height = 0;
};

// Materialized view of a channel ledger: the committed purchase records, the
// query log, and the remaining-budget snapshot taken with each logged query.
// Everything is append-only.
class WorldState {
 public:
  // Validates tx and appends it; existing records are untouched.
  absl::Status ApplyWrite(const WriteTransaction& tx, std::uint64_t height);

  // Appends rec with the remaining budget after it. A record whose
  // response.query_id was already logged is ignored.
  void RecordQuery(const QueryRecord& rec, double epsilon_rem);

  // Most recent record with an exactly equal key, or nullptr.
  const QueryRecord* FindLatest(const CategoryKey& key) const;

  const std::vector<CommittedWrite>& records() const { return records_; }
  const std::vector<QueryRecord>& query_log() const { return query_log_; }
  const std::vector<double>& budget_snapshots() const {
    return budget_snapshots_;
  }

  // Canonical bytes of records, query log, and snapshots.
  std::vector<std::uint8_t> Serialize() const;

 private:
  std::vector<CommittedWrite> records_;
  std::vector<QueryRecord> query_log_;
  std::vector<double> budget_snapshots_;
  std::unordered_map<CategoryKey, std::size_t, CategoryKeyHash> latest_;
  std::unordered_set<std::string> logged_ids_;
};

}  // namespace edh

#endif  // EDH_LEDGER_WORLD_STATE_H_
