#include "edh/network/network.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace edh {

NetworkConfig DefaultNetworkConfig(double epsilon_t,
                                   std::vector<std::string> clients) {
  NetworkConfig config;
  config.peers = {{"peer0.org1", "org1"}, {"peer0.org2", "org2"}};
  ChannelSpec channel;
  channel.channel_id = "mychannel";
  channel.members = {"peer0.org1", "peer0.org2"};
  channel.endorsement_policy = 1;
  channel.epsilon_t = epsilon_t;
  channel.clients = std::move(clients);
  config.channels.push_back(std::move(channel));
  return config;
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kProposal:
      return "proposal";
    case Phase::kEndorsement:
      return "endorsement";
    case Phase::kOrdering:
      return "ordering";
    case Phase::kValidation:
      return "validation";
  }
  return "unknown";
}

FlowStats ComputeFlowStats(std::span<const TransactionReceipt> receipts) {
  FlowStats stats;
  stats.submitted = receipts.size();
  if (receipts.empty()) return stats;
  std::uint64_t first_submit = receipts.front().submit_tick;
  std::uint64_t last_commit = 0;
  std::uint64_t latency_sum = 0;
  for (const TransactionReceipt& r : receipts) {
    first_submit = std::min(first_submit, r.submit_tick);
    if (!r.committed()) {
      ++stats.rejected;
      continue;
    }
    ++stats.committed;
    const std::uint64_t latency = *r.commit_tick - r.submit_tick;
    latency_sum += latency;
    stats.max_latency = std::max(stats.max_latency, latency);
    last_commit = std::max(last_commit, *r.commit_tick);
  }
  if (stats.committed > 0) {
    stats.span_ticks = last_commit - first_submit;
    stats.mean_latency =
        static_cast<double>(latency_sum) / static_cast<double>(stats.committed);
    stats.throughput = static_cast<double>(stats.committed) /
                       static_cast<double>(std::max<std::uint64_t>(
                           stats.span_ticks, 1));
  }
  return stats;
}

Network::Network(NetworkConfig config) : config_(std::move(config)) {}

absl::StatusOr<Network> Network::Create(NetworkConfig config) {
  if (config.peers.empty()) {
    return MakeError(ErrorKind::kConfigInvalid, "network has no peers");
  }
  if (config.orderer.max_batch_size == 0) {
    return MakeError(ErrorKind::kConfigInvalid, "max_batch_size must be >= 1");
  }
  Network net(std::move(config));
  for (const PeerSpec& spec : net.config_.peers) {
    if (net.peer(spec.peer_id) != nullptr) {
      return MakeError(ErrorKind::kConfigInvalid,
                       absl::StrCat("duplicate peer ", spec.peer_id));
    }
    net.peers_.emplace_back(spec.peer_id, spec.org_id, net.config_.chaincode,
                            DeriveSeed(net.config_.seed,
                                       absl::StrCat("peer/", spec.peer_id)));
  }
  for (const ChannelSpec& ch : net.config_.channels) {
    if (ch.members.empty() || ch.endorsement_policy < 1 ||
        ch.endorsement_policy > ch.members.size()) {
      return MakeError(ErrorKind::kConfigInvalid,
                       absl::StrCat("channel ", ch.channel_id,
                                    ": endorsement policy must be in [1, ",
                                    ch.members.size(), "]"));
    }
    if (net.orderers_.contains(ch.channel_id)) {
      return MakeError(ErrorKind::kConfigInvalid,
                       absl::StrCat("duplicate channel ", ch.channel_id));
    }
    ChannelMembership membership{
        ch.channel_id, ch.members, ch.endorsement_policy, ch.epsilon_t,
        DeriveSeed(net.config_.seed, absl::StrCat("channel/", ch.channel_id))};
    for (const std::string& member : ch.members) {
      Peer* p = net.mutable_peer(member);
      if (p == nullptr) {
        return MakeError(ErrorKind::kConfigInvalid,
                         absl::StrCat("unknown peer ", member));
      }
      EDH_RETURN_IF_ERROR(p->JoinChannel(membership));
    }
    net.orderers_.emplace(ch.channel_id, SoloOrderer(net.config_.orderer));
  }
  return net;
}

absl::Status Network::RegisterClient(std::string_view channel_id,
                                     std::string_view client_id) {
  for (ChannelSpec& ch : config_.channels) {
    if (ch.channel_id != channel_id) continue;
    if (std::find(ch.clients.begin(), ch.clients.end(), client_id) ==
        ch.clients.end()) {
      ch.clients.emplace_back(client_id);
    }
    return absl::OkStatus();
  }
  return MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown channel ", AsAbsl(channel_id)));
}

const TransactionReceipt* Network::receipt(std::string_view tx_id) const {
  auto it = receipt_index_.find(tx_id);
  return it == receipt_index_.end() ? nullptr : &receipts_[it->second];
}

const Peer* Network::peer(std::string_view peer_id) const {
  for (const Peer& p : peers_) {
    if (p.peer_id() == peer_id) return &p;
  }
  return nullptr;
}

Peer* Network::mutable_peer(std::string_view peer_id) {
  for (Peer& p : peers_) {
    if (p.peer_id() == peer_id) return &p;
  }
  return nullptr;
}

const ChannelSpec* Network::channel(std::string_view channel_id) const {
  for (const ChannelSpec& ch : config_.channels) {
    if (ch.channel_id == channel_id) return &ch;
  }
  return nullptr;
}

void Network::ResetCounters() {
  for (Peer& p : peers_) p.ResetCounters();
}

std::string Network::Schedule(std::uint64_t tick, Proposal proposal,
                              std::vector<std::string> endorsers) {
  if (proposal.tx_id.empty()) {
    proposal.tx_id = absl::StrFormat("tx-%06d", next_tx_);
  }
  ++next_tx_;
  std::string id = proposal.tx_id;
  tick = std::max(tick, now_);
  schedule_.emplace(tick, Scheduled{tick, std::move(proposal),
                                    std::move(endorsers)});
  return id;
}

TransactionReceipt Network::Submit(Proposal proposal,
                                   std::vector<std::string> endorsers) {
  const std::string id =
      Schedule(now_, std::move(proposal), std::move(endorsers));
  Run();
  return *receipt(id);
}

void Network::Run() {
  std::uint64_t tick = now_;
  auto orderers_idle = [&] {
    return std::all_of(orderers_.begin(), orderers_.end(),
                       [](const auto& kv) { return kv.second.pending() == 0; });
  };
  while (!schedule_.empty() || !orderers_idle()) {
    auto range = schedule_.equal_range(tick);
    std::vector<Scheduled> arrivals;
    for (auto it = range.first; it != range.second; ++it) {
      arrivals.push_back(std::move(it->second));
    }
    schedule_.erase(range.first, range.second);
    for (const Scheduled& item : arrivals) Process(item, tick);
    for (auto& [channel_id, orderer] : orderers_) {
      auto& batches = staged_cuts_[channel_id];
      for (auto& b : orderer.Tick(tick)) batches.push_back(std::move(b));
    }
    // Blocks cut during this tick reach the peers before the next tick.
    auto staged = std::move(staged_cuts_);
    staged_cuts_.clear();
    for (auto& [channel_id, batches] : staged) {
      if (!batches.empty()) CommitBatches(channel_id, std::move(batches), tick);
    }
    ++tick;
  }
  now_ = std::max(now_, tick);
}

void Network::Fail(TransactionReceipt& r, Phase phase, std::uint64_t tick,
                   const absl::Status& status) {
  r.phases[static_cast<std::size_t>(phase)] = {PhaseState::kFailed, tick};
  r.rejection_kind = ErrorKindOf(status);
  r.rejection_reason = std::string(status.message());
}

void Network::Process(const Scheduled& item, std::uint64_t tick) {
  const Proposal& p = item.proposal;
  receipt_index_[p.tx_id] = receipts_.size();
  receipts_.push_back({});
  TransactionReceipt& r = receipts_.back();
  r.tx_id = p.tx_id;
  r.channel_id = p.channel_id;
  r.client_id = p.client_id;
  r.is_query = std::holds_alternative<QueryTransaction>(p.request);
  r.submit_tick = tick;

  // Phase 1: proposal.
  const ChannelSpec* ch = channel(p.channel_id);
  if (ch == nullptr) {
    Fail(r, Phase::kProposal, tick,
         MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown channel ", p.channel_id)));
    return;
  }
  if (std::find(ch->clients.begin(), ch->clients.end(), p.client_id) ==
      ch->clients.end()) {
    Fail(r, Phase::kProposal, tick,
         MakeError(ErrorKind::kUnauthorized,
                   absl::StrCat("client ", p.client_id,
                                " is not authorized on ", p.channel_id)));
    return;
  }
  const absl::Status valid =
      r.is_query ? ValidateQuery(std::get<QueryTransaction>(p.request))
                 : ValidateWrite(std::get<WriteTransaction>(p.request));
  if (!valid.ok()) {
    Fail(r, Phase::kProposal, tick, valid);
    return;
  }
  r.phases[0] = {PhaseState::kOk, tick};

  // Phase 2: endorsement.
  std::vector<std::string> targets = item.endorsers;
  if (targets.empty()) {
    targets.assign(ch->members.begin(),
                   ch->members.begin() +
                       static_cast<std::ptrdiff_t>(ch->endorsement_policy));
  }
  std::vector<LedgerTransaction> endorsed;
  auto abandon = [&] {
    for (const LedgerTransaction& tx : endorsed) {
      for (const Endorsement& e : tx.endorsements) {
        if (Peer* peer = mutable_peer(e.peer_id)) {
          peer->Abandon(p.channel_id, p.tx_id);
        }
      }
    }
  };
  for (const std::string& target : targets) {
    Peer* peer = mutable_peer(target);
    absl::StatusOr<LedgerTransaction> tx =
        peer == nullptr
            ? absl::StatusOr<LedgerTransaction>(MakeError(
                  ErrorKind::kNotMember, absl::StrCat("unknown peer ", target)))
            : peer->Endorse(p);
    if (!tx.ok()) {
      abandon();
      Fail(r, Phase::kEndorsement, tick, tx.status());
      return;
    }
    endorsed.push_back(*std::move(tx));
    r.endorsers.push_back(target);
  }
  LedgerTransaction merged = endorsed.front();
  const Digest digest = ProposalDigest(merged);
  for (std::size_t i = 1; i < endorsed.size(); ++i) {
    if (ProposalDigest(endorsed[i]) != digest) {
      abandon();
      Fail(r, Phase::kEndorsement, tick,
           MakeError(ErrorKind::kEndorsementFailure,
                     absl::StrCat("endorsers disagree on ", p.tx_id)));
      return;
    }
    merged.endorsements.push_back(endorsed[i].endorsements.front());
  }
  if (CountValidEndorsements(merged, ch->members) < ch->endorsement_policy) {
    abandon();
    Fail(r, Phase::kEndorsement, tick,
         MakeError(ErrorKind::kEndorsementFailure,
                   absl::StrCat(p.tx_id, " does not satisfy the policy")));
    return;
  }
  r.phases[1] = {PhaseState::kOk, tick};

  // Phase 3 starts: hand to the orderer.
  auto& batches = staged_cuts_[p.channel_id];
  for (auto& b : orderers_.at(p.channel_id).Enqueue(std::move(merged), tick)) {
    batches.push_back(std::move(b));
  }
}

void Network::CommitBatches(std::string_view channel_id,
                            std::vector<std::vector<LedgerTransaction>> batches,
                            std::uint64_t cut_tick) {
  const ChannelSpec* ch = channel(channel_id);
  const Peer* anchor = peer(ch->members.front());
  for (auto& batch : batches) {
    std::vector<std::string> ids;
    for (const LedgerTransaction& tx : batch) ids.push_back(tx.tx_id);
    absl::StatusOr<Block> block =
        BuildBlock(std::move(batch), anchor->ledger(channel_id)->tip());
    if (!block.ok()) continue;
    for (const std::string& id : ids) {
      receipts_[receipt_index_.at(id)].phases[2] = {PhaseState::kOk, cut_tick};
    }
    absl::StatusOr<BlockCommitResult> result = DeliverBlock(channel_id, *block);
    const std::uint64_t commit_tick = cut_tick + 1;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      TransactionReceipt& r = receipts_[receipt_index_.at(ids[i])];
      if (!result.ok()) {
        Fail(r, Phase::kValidation, commit_tick, result.status());
        continue;
      }
      const absl::Status& st = result->tx_status[i];
      if (!st.ok()) {
        Fail(r, Phase::kValidation, commit_tick, st);
        continue;
      }
      r.phases[3] = {PhaseState::kOk, commit_tick};
      r.commit_tick = commit_tick;
      r.commit_height = result->height;
      r.query_record = result->query_records[i];
    }
  }
}

absl::StatusOr<BlockCommitResult> Network::DeliverBlock(
    std::string_view channel_id, const Block& block) {
  const ChannelSpec* ch = channel(channel_id);
  if (ch == nullptr) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("unknown channel ", AsAbsl(channel_id)));
  }
  std::optional<absl::StatusOr<BlockCommitResult>> first;
  for (const std::string& member : ch->members) {
    absl::StatusOr<BlockCommitResult> res =
        mutable_peer(member)->Deliver(channel_id, block);
    if (!first) first = std::move(res);
  }
  return *std::move(first);
}

}  // namespace edh
