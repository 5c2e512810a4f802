#ifndef EDH_LEDGER_CHANNEL_LEDGER_H_
#define EDH_LEDGER_CHANNEL_LEDGER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "edh/budget/accountant.h"
#include "edh/ledger/block.h"
#include "edh/ledger/world_state.h"

namespace edh {

// World state plus the provider's accountant: everything a committed
// transaction can change.
struct LedgerState {
  WorldState world;
  BudgetAccountant budget;

  // Applies one transaction at the given height.
  //  - writes are validated and appended;
  //  - a query outcome whose exact value is already logged under the same key
  //    is recorded as a reuse and costs nothing;
  //  - any other perturbed outcome is charged its epsilon (the value has been
  //    released) and fails with Exhausted if the budget cannot cover it;
  //  - exact-mode outcomes are not logged.
  // A failed transaction leaves the state unchanged. When committed is set
  // and a query record was logged, it receives that record.
  absl::Status Apply(const LedgerTransaction& tx, std::uint64_t height,
                     std::optional<QueryRecord>* committed = nullptr);
};

struct BlockCommitResult {
  std::uint64_t height = 0;
  std::vector<absl::Status> tx_status;  // parallel to block.txs
  std::vector<std::optional<QueryRecord>> query_records;  // logged records
};

// Hash-chained block store for one channel with its materialized state.
class ChannelLedger {
 public:
  static absl::StatusOr<ChannelLedger> Create(std::string channel_id,
                                              double epsilon_t);

  // Appends a block that links to the current tip and folds its
  // transactions. Per-transaction failures do not stop the block.
  absl::StatusOr<BlockCommitResult> Append(const Block& block);

  const std::string& channel_id() const { return channel_id_; }
  const std::vector<Block>& chain() const { return chain_; }
  const Block& tip() const { return chain_.back(); }
  std::uint64_t height() const { return chain_.back().height; }
  const LedgerState& state() const { return state_; }

 private:
  ChannelLedger(std::string channel_id, LedgerState state);

  std::string channel_id_;
  std::vector<Block> chain_;
  LedgerState state_;
};

// Folds a chain into a fresh state; used for replay and import.
absl::StatusOr<ChannelLedger> ReplayChain(std::string channel_id,
                                          double epsilon_t,
                                          std::span<const Block> chain);

}  // namespace edh

#endif  // EDH_LEDGER_CHANNEL_LEDGER_H_
