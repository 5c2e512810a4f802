#ifndef EDH_NETWORK_NETWORK_H_
#define EDH_NETWORK_NETWORK_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "edh/common/status.h"
#include "edh/network/orderer.h"
#include "edh/network/peer.h"

namespace edh {

struct PeerSpec {
  std::string peer_id;
  std::string org_id;
};

struct ChannelSpec {
  std::string channel_id = "mychannel";
  std::vector<std::string> members;
  std::size_t endorsement_policy = 1;
  double epsilon_t = 1.0;
  std::vector<std::string> clients;  // authorized client applications
};

struct NetworkConfig {
  std::vector<PeerSpec> peers;
  std::vector<ChannelSpec> channels;
  OrdererConfig orderer;
  ChaincodeOptions chaincode;
  std::uint64_t seed = 0;
};

// Two organizations with one peer each, joined to "mychannel" with an
// endorsement policy of one.
NetworkConfig DefaultNetworkConfig(double epsilon_t,
                                   std::vector<std::string> clients);

enum class Phase { kProposal = 0, kEndorsement, kOrdering, kValidation };
std::string_view PhaseName(Phase phase);

enum class PhaseState { kPending, kOk, kFailed };

struct PhaseOutcome {
  PhaseState state = PhaseState::kPending;
  std::uint64_t tick = 0;
};

struct TransactionReceipt {
  std::string tx_id;
  std::string channel_id;
  std::string client_id;
  bool is_query = false;
  std::array<PhaseOutcome, 4> phases{};
  std::uint64_t submit_tick = 0;
  std::optional<std::uint64_t> commit_tick;
  std::optional<std::uint64_t> commit_height;
  std::optional<ErrorKind> rejection_kind;
  std::string rejection_reason;
  std::vector<std::string> endorsers;
  std::optional<QueryRecord> query_record;  // as committed

  bool committed() const { return commit_height.has_value(); }
  const PhaseOutcome& phase(Phase p) const {
    return phases[static_cast<std::size_t>(p)];
  }
};

struct FlowStats {
  std::size_t submitted = 0;
  std::size_t committed = 0;
  std::size_t rejected = 0;
  std::uint64_t span_ticks = 0;  // last commit tick - first submit tick
  double throughput = 0.0;       // committed per tick
  double mean_latency = 0.0;     // ticks, committed only
  std::uint64_t max_latency = 0;
};

FlowStats ComputeFlowStats(std::span<const TransactionReceipt> receipts);

// Discrete-tick simulator. Within a tick, arrivals are endorsed in schedule
// order and submitted to the channel's orderer; batches cut during tick t are
// committed on every member at t + 1.
class Network {
 public:
  static absl::StatusOr<Network> Create(NetworkConfig config);

  absl::Status RegisterClient(std::string_view channel_id,
                              std::string_view client_id);

  // Queues a proposal for tick (>= now()). Endorsers default to the first
  // endorsement_policy members of the channel. Returns the tx id.
  std::string Schedule(std::uint64_t tick, Proposal proposal,
                       std::vector<std::string> endorsers = {});

  // Processes every scheduled proposal and drains the orderers.
  void Run();

  // Schedules at now() and runs to completion.
  TransactionReceipt Submit(Proposal proposal,
                            std::vector<std::string> endorsers = {});

  // Delivers an externally built block to every member of the channel.
  // Returns the first member's result.
  absl::StatusOr<BlockCommitResult> DeliverBlock(std::string_view channel_id,
                                                 const Block& block);

  std::uint64_t now() const { return now_; }
  const std::vector<TransactionReceipt>& receipts() const { return receipts_; }
  const TransactionReceipt* receipt(std::string_view tx_id) const;
  const std::vector<Peer>& peers() const { return peers_; }
  const Peer* peer(std::string_view peer_id) const;
  const ChannelSpec* channel(std::string_view channel_id) const;
  void ResetCounters();

 private:
  struct Scheduled {
    std::uint64_t tick = 0;
    Proposal proposal;
    std::vector<std::string> endorsers;
  };

  explicit Network(NetworkConfig config);

  Peer* mutable_peer(std::string_view peer_id);
  void Process(const Scheduled& item, std::uint64_t tick);
  void Fail(TransactionReceipt& r, Phase phase, std::uint64_t tick,
            const absl::Status& status);
  void CommitBatches(std::string_view channel_id,
                     std::vector<std::vector<LedgerTransaction>> batches,
                     std::uint64_t cut_tick);

  NetworkConfig config_;
  std::vector<Peer> peers_;
  std::map<std::string, SoloOrderer, std::less<>> orderers_;
  std::multimap<std::uint64_t, Scheduled> schedule_;
  std::map<std::string, std::vector<std::vector<LedgerTransaction>>,
           std::less<>>
      staged_cuts_;
  std::vector<TransactionReceipt> receipts_;
  std::map<std::string, std::size_t, std::less<>> receipt_index_;
  std::uint64_t now_ = 0;
  std::uint64_t next_tx_ = 0;
};

}  // namespace edh

#endif  // EDH_NETWORK_NETWORK_H_
