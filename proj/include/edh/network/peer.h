#ifndef EDH_NETWORK_PEER_H_
#define EDH_NETWORK_PEER_H_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "edh/chaincode/engine.h"
#include "edh/ledger/block.h"
#include "edh/ledger/channel_ledger.h"

namespace edh {

// A client request addressed to one channel.
struct Proposal {
  std::string tx_id;
  std::string channel_id;
  std::string client_id;
  std::variant<WriteTransaction, QueryTransaction> request;
  double epsilon_f = 0.0;  // per-query budget; ignored for writes
};

struct ChannelMembership {
  std::string channel_id;
  std::vector<std::string> members;
  std::size_t endorsement_policy = 1;
  double epsilon_t = 1.0;
  std::uint64_t noise_seed = 0;  // shared by all members (edh mode)
};

// Counts endorsements on tx that come from distinct channel members and
// verify against the proposal digest.
std::size_t CountValidEndorsements(const LedgerTransaction& tx,
                                   const std::vector<std::string>& members);

class Peer {
 public:
  Peer(std::string peer_id, std::string org_id, ChaincodeOptions options,
       std::uint64_t seed);

  absl::Status JoinChannel(const ChannelMembership& membership);
  bool IsMember(std::string_view channel_id) const;

  // Simulates the chaincode against this peer's view of the channel
  // (committed state plus its own endorsed-but-uncommitted queries) and
  // returns the transaction carrying this peer's endorsement.
  absl::StatusOr<LedgerTransaction> Endorse(const Proposal& proposal);

  // Drops an endorsed transaction that the client abandoned.
  void Abandon(std::string_view channel_id, std::string_view tx_id);

  // Validates the endorsement policy of every transaction. A block with any
  // failing transaction goes to the audit store and is not appended.
  absl::StatusOr<BlockCommitResult> Deliver(std::string_view channel_id,
                                            const Block& block);

  const std::string& peer_id() const { return peer_id_; }
  const std::string& org_id() const { return org_id_; }
  const ChannelLedger* ledger(std::string_view channel_id) const;
  const std::vector<Block>& audit_store() const { return audit_; }
  const ChaincodeCounters& counters() const { return chaincode_.counters(); }
  void ResetCounters() { chaincode_.ResetCounters(); }

 private:
  struct ChannelView {
    ChannelMembership membership;
    ChannelLedger ledger;
    LedgerState speculative;
    std::vector<LedgerTransaction> pending;
    NoiseStream naive_stream;
  };

  void RebuildSpeculative(ChannelView& view);

  std::string peer_id_;
  std::string org_id_;
  std::uint64_t seed_;
  Chaincode chaincode_;
  std::map<std::string, ChannelView, std::less<>> channels_;
  std::vector<Block> audit_;
};

}  // namespace edh

#endif  // EDH_NETWORK_PEER_H_
