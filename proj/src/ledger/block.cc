#include "edh/ledger/block.h"

#include "edh/common/status.h"

namespace edh {
namespace {

constexpr std::uint8_t kWriteTag = 1;
constexpr std::uint8_t kQueryTag = 2;

void EncodeBody(const LedgerTransaction& tx, CanonicalWriter& w) {
  w.PutString(tx.tx_id);
  if (const auto* write = std::get_if<WriteTransaction>(&tx.payload)) {
    w.PutU8(kWriteTag);
    Encode(*write, w);
  } else {
    w.PutU8(kQueryTag);
    Encode(std::get<QueryOutcome>(tx.payload), w);
  }
}

}  // namespace

Digest SignProposal(std::string_view peer_id, const Digest& proposal_digest) {
  CanonicalWriter w;
  w.PutString(peer_id);
  w.PutDigest(proposal_digest);
  return Sha256(w.bytes());
}

Digest ProposalDigest(const LedgerTransaction& tx) {
  CanonicalWriter w;
  EncodeBody(tx, w);
  return Sha256(w.bytes());
}

void Encode(const LedgerTransaction& tx, CanonicalWriter& w) {
  EncodeBody(tx, w);
  w.PutU64(tx.endorsements.size());
  for (const Endorsement& e : tx.endorsements) {
    w.PutString(e.peer_id);
    w.PutDigest(e.signature);
  }
}

Digest ComputeBlockHash(std::uint64_t height, const Digest& prev_hash,
                        std::span<const LedgerTransaction> txs) {
  CanonicalWriter w;
  w.PutU64(height);
  w.PutDigest(prev_hash);
  w.PutU64(txs.size());
  for (const LedgerTransaction& tx : txs) Encode(tx, w);
  return Sha256(w.bytes());
}

Block MakeGenesisBlock() {
  Block genesis;
  genesis.block_hash = ComputeBlockHash(0, kZeroDigest, genesis.txs);
  return genesis;
}

absl::StatusOr<Block> BuildBlock(std::vector<LedgerTransaction> pending,
                                 const Block& prev) {
  if (pending.empty()) {
    return MakeError(ErrorKind::kEmptyBatch, "cannot build an empty block");
  }
  Block block;
  block.height = prev.height + 1;
  block.prev_hash = prev.block_hash;
  block.txs = std::move(pending);
  block.block_hash = ComputeBlockHash(block.height, block.prev_hash, block.txs);
  return block;
}

bool VerifyChain(std::span<const Block> chain) {
  if (chain.empty()) return false;
  const Block& genesis = chain.front();
  if (genesis.height != 0 || genesis.prev_hash != kZeroDigest ||
      !genesis.txs.empty()) {
    return false;
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    if (ComputeBlockHash(b.height, b.prev_hash, b.txs) != b.block_hash) {
      return false;
    }
    if (i == 0) continue;
    const Block& prev = chain[i - 1];
    if (b.height != prev.height + 1 || b.prev_hash != prev.block_hash) {
      return false;
    }
  }
  return true;
}

}  // namespace edh
