#include "edh/network/peer.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "edh/common/status.h"

namespace edh {

std::size_t CountValidEndorsements(const LedgerTransaction& tx,
                                   const std::vector<std::string>& members) {
  const Digest digest = ProposalDigest(tx);
  std::set<std::string_view> seen;
  for (const Endorsement& e : tx.endorsements) {
    if (std::find(members.begin(), members.end(), e.peer_id) == members.end()) {
      continue;
    }
    if (e.signature != SignProposal(e.peer_id, digest)) continue;
    seen.insert(e.peer_id);
  }
  return seen.size();
}

Peer::Peer(std::string peer_id, std::string org_id, ChaincodeOptions options,
           std::uint64_t seed)
    : peer_id_(std::move(peer_id)),
      org_id_(std::move(org_id)),
      seed_(seed),
      chaincode_(options) {}

absl::Status Peer::JoinChannel(const ChannelMembership& membership) {
  if (channels_.contains(membership.channel_id)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat(peer_id_, " already joined ",
                                  membership.channel_id));
  }
  EDH_ASSIGN_OR_RETURN(
      ChannelLedger ledger,
      ChannelLedger::Create(membership.channel_id, membership.epsilon_t));
  LedgerState speculative = ledger.state();
  const std::uint64_t stream_seed =
      DeriveSeed(seed_, absl::StrCat("naive/", membership.channel_id));
  channels_.emplace(membership.channel_id,
                    ChannelView{membership, std::move(ledger),
                                std::move(speculative), {},
                                NoiseStream(stream_seed)});
  return absl::OkStatus();
}

bool Peer::IsMember(std::string_view channel_id) const {
  return channels_.find(channel_id) != channels_.end();
}

const ChannelLedger* Peer::ledger(std::string_view channel_id) const {
  auto it = channels_.find(channel_id);
  return it == channels_.end() ? nullptr : &it->second.ledger;
}

absl::StatusOr<LedgerTransaction> Peer::Endorse(const Proposal& proposal) {
  auto it = channels_.find(proposal.channel_id);
  if (it == channels_.end()) {
    return MakeError(ErrorKind::kNotMember,
                     absl::StrCat(peer_id_, " is not a member of ",
                                  proposal.channel_id));
  }
  ChannelView& view = it->second;
  LedgerTransaction tx;
  tx.tx_id = proposal.tx_id;

  if (const auto* write = std::get_if<WriteTransaction>(&proposal.request)) {
    EDH_RETURN_IF_ERROR(ValidateWrite(*write));
    tx.payload = *write;
  } else {
    const QueryTransaction& q = std::get<QueryTransaction>(proposal.request);
    EDH_ASSIGN_OR_RETURN(CategoryKey key, Categorize(q));
    const std::uint64_t height = view.ledger.height();
    absl::StatusOr<QueryAnswer> answer;
    if (chaincode_.options().mode == NoiseMode::kNaive) {
      answer = chaincode_.AnswerQuery(q, proposal.tx_id, view.speculative.world,
                                      view.speculative.budget,
                                      proposal.epsilon_f, view.naive_stream,
                                      height);
    } else {
      NoiseStream stream(
          DeriveNoiseSeed(view.membership.noise_seed, key, height));
      answer = chaincode_.AnswerQuery(q, proposal.tx_id, view.speculative.world,
                                      view.speculative.budget,
                                      proposal.epsilon_f, stream, height);
    }
    if (!answer.ok()) return answer.status();
    tx.payload = QueryOutcome{q, answer->record, answer->epsilon_rem};
  }

  tx.endorsements.push_back(
      Endorsement{peer_id_, SignProposal(peer_id_, ProposalDigest(tx))});
  view.pending.push_back(tx);
  return tx;
}

void Peer::Abandon(std::string_view channel_id, std::string_view tx_id) {
  auto it = channels_.find(channel_id);
  if (it == channels_.end()) return;
  ChannelView& view = it->second;
  const auto removed = std::erase_if(
      view.pending,
      [&](const LedgerTransaction& tx) { return tx.tx_id == tx_id; });
  if (removed > 0) RebuildSpeculative(view);
}

absl::StatusOr<BlockCommitResult> Peer::Deliver(std::string_view channel_id,
                                                const Block& block) {
  auto it = channels_.find(channel_id);
  if (it == channels_.end()) {
    return MakeError(ErrorKind::kNotMember,
                     absl::StrCat(peer_id_, " is not a member of ", AsAbsl(channel_id)));
  }
  ChannelView& view = it->second;
  auto drop_pending = [&] {
    std::erase_if(view.pending, [&](const LedgerTransaction& p) {
      return std::any_of(
          block.txs.begin(), block.txs.end(),
          [&](const LedgerTransaction& b) { return b.tx_id == p.tx_id; });
    });
  };

  for (const LedgerTransaction& tx : block.txs) {
    const std::size_t valid =
        CountValidEndorsements(tx, view.membership.members);
    if (valid < view.membership.endorsement_policy) {
      audit_.push_back(block);
      drop_pending();
      RebuildSpeculative(view);
      return MakeError(
          ErrorKind::kValidationFailure,
          absl::StrCat("tx ", tx.tx_id, " has ", valid, " valid endorsements, ",
                       view.membership.endorsement_policy, " required"));
    }
  }
  absl::StatusOr<BlockCommitResult> result = view.ledger.Append(block);
  if (!result.ok()) {
    audit_.push_back(block);
  }
  drop_pending();
  RebuildSpeculative(view);
  return result;
}

void Peer::RebuildSpeculative(ChannelView& view) {
  view.speculative = view.ledger.state();
  const std::uint64_t next = view.ledger.height() + 1;
  for (const LedgerTransaction& tx : view.pending) {
    if (tx.is_query()) view.speculative.Apply(tx, next).IgnoreError();
  }
}

}  // namespace edh
