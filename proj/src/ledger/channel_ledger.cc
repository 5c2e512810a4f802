#include "edh/ledger/channel_ledger.h"

#include "absl/strings/str_cat.h"
#include "edh/common/status.h"

namespace edh {

absl::Status LedgerState::Apply(const LedgerTransaction& tx,
                                std::uint64_t height,
                                std::optional<QueryRecord>* committed) {
  if (const auto* write = std::get_if<WriteTransaction>(&tx.payload)) {
    return world.ApplyWrite(*write, height);
  }
  const QueryOutcome& outcome = std::get<QueryOutcome>(tx.payload);
  const QueryRecord& proposed = outcome.record;
  if (proposed.epsilon_spent == 0.0) return absl::OkStatus();

  QueryRecord rec = proposed;
  rec.recorded_at = height;
  const QueryRecord* cached = world.FindLatest(rec.key);
  if (cached != nullptr && cached->response.value == proposed.response.value) {
    rec.response.reused = true;
    rec.response.epsilon_used = cached->response.epsilon_used;
    rec.epsilon_spent = cached->epsilon_spent;
    budget.LogReuse(rec.response.query_id, outcome.query.requester_id);
  } else {
    rec.response.reused = false;
    EDH_RETURN_IF_ERROR(budget.TrySpend(proposed.response.epsilon_used,
                                        rec.response.query_id,
                                        outcome.query.requester_id));
    rec.epsilon_spent = proposed.response.epsilon_used;
  }
  world.RecordQuery(rec, budget.epsilon_rem());
  if (committed != nullptr) *committed = std::move(rec);
  return absl::OkStatus();
}

ChannelLedger::ChannelLedger(std::string channel_id, LedgerState state)
    : channel_id_(std::move(channel_id)),
      chain_{MakeGenesisBlock()},
      state_(std::move(state)) {}

absl::StatusOr<ChannelLedger> ChannelLedger::Create(std::string channel_id,
                                                    double epsilon_t) {
  EDH_ASSIGN_OR_RETURN(BudgetAccountant budget,
                       BudgetAccountant::Create(epsilon_t));
  return ChannelLedger(std::move(channel_id),
                       LedgerState{WorldState{}, std::move(budget)});
}

absl::StatusOr<BlockCommitResult> ChannelLedger::Append(const Block& block) {
  if (block.height != tip().height + 1 || block.prev_hash != tip().block_hash) {
    return MakeError(ErrorKind::kValidationFailure,
                     absl::StrCat("block ", block.height,
                                  " does not link to tip ", tip().height));
  }
  if (ComputeBlockHash(block.height, block.prev_hash, block.txs) !=
      block.block_hash) {
    return MakeError(ErrorKind::kValidationFailure,
                     absl::StrCat("block ", block.height, " hash mismatch"));
  }
  BlockCommitResult result;
  result.height = block.height;
  result.tx_status.reserve(block.txs.size());
  result.query_records.resize(block.txs.size());
  for (std::size_t i = 0; i < block.txs.size(); ++i) {
    result.tx_status.push_back(
        state_.Apply(block.txs[i], block.height, &result.query_records[i]));
  }
  chain_.push_back(block);
  return result;
}

absl::StatusOr<ChannelLedger> ReplayChain(std::string channel_id,
                                          double epsilon_t,
                                          std::span<const Block> chain) {
  if (!VerifyChain(chain)) {
    return MakeError(ErrorKind::kValidationFailure, "chain does not verify");
  }
  EDH_ASSIGN_OR_RETURN(ChannelLedger ledger,
                       ChannelLedger::Create(std::move(channel_id), epsilon_t));
  for (std::size_t i = 1; i < chain.size(); ++i) {
    EDH_RETURN_IF_ERROR(ledger.Append(chain[i]).status());
  }
  return ledger;
}

}  // namespace edh
