#ifndef EDH_LEDGER_BLOCK_H_
#define EDH_LEDGER_BLOCK_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/chaincode/query_record.h"
#include "edh/common/digest.h"
#include "edh/ledger/transaction.h"

namespace edh {

// Simulated signature: SHA-256 over (peer_id, proposal digest).
struct Endorsement {
  std::string peer_id;
  Digest signature{};

  friend bool operator==(const Endorsement&, const Endorsement&) = default;
};

Digest SignProposal(std::string_view peer_id, const Digest& proposal_digest);

struct LedgerTransaction {
  std::string tx_id;
  std::variant<WriteTransaction, QueryOutcome> payload;
  std::vector<Endorsement> endorsements;

  bool is_query() const {
    return std::holds_alternative<QueryOutcome>(payload);
  }

  friend bool operator==(const LedgerTransaction&,
                         const LedgerTransaction&) = default;
};

// Digest of everything but the endorsements; this is what endorsers sign.
Digest ProposalDigest(const LedgerTransaction& tx);

void Encode(const LedgerTransaction& tx, CanonicalWriter& w);

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash{};
  std::vector<LedgerTransaction> txs;
  Digest block_hash{};
};

Digest ComputeBlockHash(std::uint64_t height, const Digest& prev_hash,
                        std::span<const LedgerTransaction> txs);

// Height 0, all-zero prev_hash, no transactions.
Block MakeGenesisBlock();

// Fails with EmptyBatch when pending is empty.
absl::StatusOr<Block> BuildBlock(std::vector<LedgerTransaction> pending,
                                 const Block& prev);

// True iff chain[0] is a genesis block and every hash and link recomputes.
bool VerifyChain(std::span<const Block> chain);

}  // namespace edh

#endif  // EDH_LEDGER_BLOCK_H_
