#include <gtest/gtest.h>

#include "edh/bench/workload.h"
#include "edh/network/network.h"
#include "edh/network/orderer.h"
#include "edh/network/peer.h"
#include "test_support.h"

namespace edh {
namespace {

using testing::Query;
using testing::Write;

LedgerTransaction Tx(int i) {
  LedgerTransaction tx;
  tx.tx_id = "t" + std::to_string(i);
  tx.payload = Write("Bob", "a", "red", 1 + i);
  return tx;
}

Proposal WriteProposal(WriteTransaction w, std::string client = "app") {
  Proposal p;
  p.channel_id = "mychannel";
  p.client_id = std::move(client);
  p.request = std::move(w);
  return p;
}

Proposal QueryProposal(QueryTransaction q, double eps, std::string client = "app") {
  Proposal p;
  p.channel_id = "mychannel";
  p.client_id = std::move(client);
  p.request = std::move(q);
  p.epsilon_f = eps;
  return p;
}

Network MakeNet(NoiseMode mode = NoiseMode::kEdh, double eps_t = 10.0,
                std::size_t policy = 1, std::uint64_t seed = 1) {
  NetworkConfig cfg = DefaultNetworkConfig(eps_t, {"app"});
  cfg.chaincode.mode = mode;
  cfg.channels[0].endorsement_policy = policy;
  cfg.seed = seed;
  return Network::Create(cfg).value();
}

std::vector<Block> Chain(const Network& net, std::string_view peer) {
  return net.peer(peer)->ledger("mychannel")->chain();
}

TEST(SoloOrderer, TenTxsBatchFiveGiveTwoBlocks) {
  SoloOrderer o({5, 100});
  std::vector<std::vector<LedgerTransaction>> cuts;
  for (int i = 0; i < 10; ++i) {
    for (auto& b : o.Enqueue(Tx(i), 0)) cuts.push_back(std::move(b));
  }
  ASSERT_EQ(cuts.size(), 2u);
  for (int b = 0; b < 2; ++b) {
    ASSERT_EQ(cuts[b].size(), 5u);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(cuts[b][i].tx_id, "t" + std::to_string(b * 5 + i));
  }
  EXPECT_EQ(o.pending(), 0u);
}

TEST(SoloOrderer, TimeoutCutsPartialBatch) {
  SoloOrderer o({10, 2});
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(o.Enqueue(Tx(i), 4).empty());
  EXPECT_TRUE(o.Tick(4).empty());
  EXPECT_TRUE(o.Tick(5).empty());
  auto cuts = o.Tick(6);
  ASSERT_EQ(cuts.size(), 1u);
  EXPECT_EQ(cuts[0].size(), 3u);
  EXPECT_TRUE(o.Flush().empty());
}

TEST(Network, CreateRejectsBadPolicy) {
  NetworkConfig cfg = DefaultNetworkConfig(1.0, {"app"});
  cfg.channels[0].endorsement_policy = 3;
  EXPECT_TRUE(IsError(Network::Create(cfg).status(), ErrorKind::kConfigInvalid));
  cfg.channels[0].endorsement_policy = 0;
  EXPECT_TRUE(IsError(Network::Create(cfg).status(), ErrorKind::kConfigInvalid));
  cfg.channels[0].endorsement_policy = 1;
  cfg.channels[0].members.push_back("ghost");
  EXPECT_TRUE(IsError(Network::Create(cfg).status(), ErrorKind::kConfigInvalid));
}

TEST(Endorse, MemberTokenVerifies) {
  Peer peer("p1", "org1", {}, 7);
  ASSERT_TRUE(peer.JoinChannel({"mychannel", {"p1"}, 1, 1.0, 0}).ok());
  Proposal p = WriteProposal(Write("Bob", "a", "red", 4));
  p.tx_id = "tx";
  LedgerTransaction tx = peer.Endorse(p).value();
  ASSERT_EQ(tx.endorsements.size(), 1u);
  EXPECT_EQ(tx.endorsements[0].signature, SignProposal("p1", ProposalDigest(tx)));
  EXPECT_EQ(CountValidEndorsements(tx, {"p1"}), 1u);
  EXPECT_EQ(CountValidEndorsements(tx, {"p2"}), 0u);
  tx.endorsements[0].signature[0] ^= 1;
  EXPECT_EQ(CountValidEndorsements(tx, {"p1"}), 0u);
}

TEST(Endorse, DuplicateEndorserCountsOnce) {
  Peer peer("p1", "org1", {}, 7);
  ASSERT_TRUE(peer.JoinChannel({"mychannel", {"p1", "p2"}, 1, 1.0, 0}).ok());
  Proposal p = WriteProposal(Write("Bob", "a", "red", 4));
  p.tx_id = "tx";
  LedgerTransaction tx = peer.Endorse(p).value();
  tx.endorsements.push_back(tx.endorsements[0]);
  EXPECT_EQ(CountValidEndorsements(tx, {"p1", "p2"}), 1u);
}

TEST(Endorse, NonMemberRefused) {
  Peer peer("p1", "org1", {}, 7);
  Proposal p = WriteProposal(Write("Bob", "a", "red", 4));
  EXPECT_TRUE(IsError(peer.Endorse(p).status(), ErrorKind::kNotMember));
  EXPECT_FALSE(peer.IsMember("mychannel"));
  EXPECT_EQ(peer.ledger("mychannel"), nullptr);
}

TEST(Submit, WriteReplicatesToBothPeers) {
  Network net = MakeNet();
  TransactionReceipt r = net.Submit(WriteProposal(Write("Bob", "a", "red", 4)));
  ASSERT_TRUE(r.committed()) << r.rejection_reason;
  EXPECT_EQ(*r.commit_height, 1u);
  for (const PhaseOutcome& ph : r.phases) EXPECT_EQ(ph.state, PhaseState::kOk);
  const ChannelLedger* a = net.peer("peer0.org1")->ledger("mychannel");
  const ChannelLedger* b = net.peer("peer0.org2")->ledger("mychannel");
  EXPECT_EQ(a->tip().block_hash, b->tip().block_hash);
  EXPECT_EQ(a->state().world.Serialize(), b->state().world.Serialize());
}

TEST(Submit, PolicyOneNeedsOnlyOneEndorsement) {
  Network net = MakeNet();
  TransactionReceipt r = net.Submit(WriteProposal(Write("Bob", "a", "red", 4)));
  EXPECT_EQ(r.endorsers, std::vector<std::string>{"peer0.org1"});
  TransactionReceipt r2 =
      net.Submit(WriteProposal(Write("Bob", "a", "red", 5)), {"peer0.org2"});
  EXPECT_TRUE(r2.committed());
}

TEST(Submit, ExhaustedQueryFailsAtEndorsement) {
  Network net = MakeNet(NoiseMode::kEdh, 0.5);
  ASSERT_TRUE(net.Submit(WriteProposal(Write("Bob", "a", "red", 40))).committed());
  ASSERT_TRUE(net.Submit(QueryProposal(Query(Aggregate::kSum, "Bob"), 0.5)).committed());
  const std::vector<Block> before = Chain(net, "peer0.org1");
  TransactionReceipt r = net.Submit(QueryProposal(Query(Aggregate::kSum, "Ali"), 0.1));
  EXPECT_FALSE(r.committed());
  EXPECT_EQ(r.phase(Phase::kProposal).state, PhaseState::kOk);
  EXPECT_EQ(r.phase(Phase::kEndorsement).state, PhaseState::kFailed);
  EXPECT_EQ(r.phase(Phase::kOrdering).state, PhaseState::kPending);
  EXPECT_EQ(r.rejection_kind, ErrorKind::kExhausted);
  EXPECT_EQ(Chain(net, "peer0.org1").size(), before.size());
  EXPECT_EQ(net.peer("peer0.org1")->ledger("mychannel")->state().budget.epsilon_rem(), 0.0);
}

TEST(Submit, UnauthorizedClientRejectedAtProposal) {
  Network net = MakeNet();
  TransactionReceipt r =
      net.Submit(WriteProposal(Write("Bob", "a", "red", 4), "intruder"));
  EXPECT_EQ(r.phase(Phase::kProposal).state, PhaseState::kFailed);
  EXPECT_EQ(r.rejection_kind, ErrorKind::kUnauthorized);
  ASSERT_TRUE(net.RegisterClient("mychannel", "intruder").ok());
  EXPECT_TRUE(net.Submit(WriteProposal(Write("Bob", "a", "red", 4), "intruder")).committed());
}

TEST(Submit, InvalidWriteRejectedAtProposal) {
  Network net = MakeNet();
  TransactionReceipt r = net.Submit(WriteProposal(Write("Bob", "a", "red", 0)));
  EXPECT_EQ(r.rejection_kind, ErrorKind::kInvalidQuantity);
  EXPECT_EQ(r.phase(Phase::kProposal).state, PhaseState::kFailed);
}

TEST(Submit, UnknownEndorserIsRefused) {
  Network net = MakeNet();
  TransactionReceipt r =
      net.Submit(WriteProposal(Write("Bob", "a", "red", 4)), {"peer9.org9"});
  EXPECT_EQ(r.rejection_kind, ErrorKind::kNotMember);
}

TEST(Submit, PolicyTwoAgreesInEdhButNotInNaive) {
  Network edh = MakeNet(NoiseMode::kEdh, 10.0, 2);
  ASSERT_TRUE(edh.Submit(WriteProposal(Write("Bob", "a", "red", 40))).committed());
  TransactionReceipt q = edh.Submit(QueryProposal(Query(Aggregate::kSum), 1.0));
  EXPECT_TRUE(q.committed()) << q.rejection_reason;
  EXPECT_EQ(q.endorsers.size(), 2u);

  Network naive = MakeNet(NoiseMode::kNaive, 10.0, 2);
  ASSERT_TRUE(naive.Submit(WriteProposal(Write("Bob", "a", "red", 40))).committed());
  TransactionReceipt n = naive.Submit(QueryProposal(Query(Aggregate::kSum), 1.0));
  EXPECT_FALSE(n.committed());
  EXPECT_EQ(n.rejection_kind, ErrorKind::kEndorsementFailure);
  // Abandoned endorsements leave no speculative residue.
  EXPECT_EQ(naive.peer("peer0.org1")->ledger("mychannel")->state().budget.accumulated(), 0.0);
}

TEST(Deliver, ZeroEndorsementBlockGoesToAudit) {
  Network net = MakeNet();
  ASSERT_TRUE(net.Submit(WriteProposal(Write("Bob", "a", "red", 4))).committed());
  const Block tip = net.peer("peer0.org1")->ledger("mychannel")->tip();
  LedgerTransaction bare;
  bare.tx_id = "unendorsed";
  bare.payload = Write("Eve", "a", "red", 9);
  Block b = BuildBlock({bare}, tip).value();
  absl::StatusOr<BlockCommitResult> r = net.DeliverBlock("mychannel", b);
  EXPECT_TRUE(IsError(r.status(), ErrorKind::kValidationFailure));
  for (const Peer& p : net.peers()) {
    EXPECT_EQ(p.ledger("mychannel")->height(), 1u);
    ASSERT_EQ(p.audit_store().size(), 1u);
    EXPECT_EQ(p.audit_store()[0].block_hash, b.block_hash);
  }
}

TEST(Deliver, ValidBlockAdvancesAllMembers) {
  Network net = MakeNet();
  const Block tip = net.peer("peer0.org1")->ledger("mychannel")->tip();
  LedgerTransaction tx;
  tx.tx_id = "ext";
  tx.payload = Write("Eve", "a", "red", 9);
  tx.endorsements.push_back({"peer0.org2", SignProposal("peer0.org2", ProposalDigest(tx))});
  Block b = BuildBlock({tx}, tip).value();
  ASSERT_TRUE(net.DeliverBlock("mychannel", b).ok());
  for (const Peer& p : net.peers()) {
    EXPECT_EQ(p.ledger("mychannel")->tip().block_hash, b.block_hash);
  }
}

struct FlowRun {
  std::vector<TransactionReceipt> receipts;
  std::vector<Block> chain_a;
  std::vector<Block> chain_b;
  WorldState world_a;
  WorldState world_b;
};

FlowRun RunSixFifty(NoiseMode mode, std::uint64_t seed) {
  WorkloadConfig wc;
  wc.epsilon_t = 20.0;
  Workload w = GenerateWorkload(wc).value();
  Network net = MakeNet(mode, wc.epsilon_t, 1, seed);
  for (std::size_t i = 0; i < w.writes.size(); ++i) {
    net.Schedule(i / 10, WriteProposal(w.writes[i]));
  }
  net.Run();
  const std::uint64_t start = net.now();
  for (std::size_t i = 0; i < w.queries.size(); ++i) {
    net.Schedule(start + i / 10, QueryProposal(w.queries[i].query, w.queries[i].epsilon_f));
  }
  net.Run();
  return {net.receipts(), Chain(net, "peer0.org1"), Chain(net, "peer0.org2"),
          net.peer("peer0.org1")->ledger("mychannel")->state().world,
          net.peer("peer0.org2")->ledger("mychannel")->state().world};
}

TEST(Flow, SixHundredFiftyReceiptsCommittedInOrder) {
  FlowRun run = RunSixFifty(NoiseMode::kEdh, 3);
  ASSERT_EQ(run.receipts.size(), 650u);
  for (const TransactionReceipt& r : run.receipts) {
    ASSERT_TRUE(r.committed()) << r.tx_id << ": " << r.rejection_reason;
    EXPECT_EQ(r.phase(Phase::kProposal).tick, r.submit_tick);
    for (std::size_t k = 1; k < 4; ++k) {
      EXPECT_EQ(r.phases[k].state, PhaseState::kOk);
      EXPECT_LE(r.phases[k - 1].tick, r.phases[k].tick);
    }
    EXPECT_EQ(r.phase(Phase::kValidation).tick, *r.commit_tick);
  }
  EXPECT_EQ(run.chain_a.back().block_hash, run.chain_b.back().block_hash);
  EXPECT_EQ(run.world_a.Serialize(), run.world_b.Serialize());
  EXPECT_TRUE(VerifyChain(run.chain_a));
  EXPECT_EQ(run.world_a.records().size(), 500u);
  EXPECT_EQ(run.world_a.query_log().size(), 150u);
}

TEST(Flow, DeterministicForFixedSeeds) {
  FlowRun a = RunSixFifty(NoiseMode::kNaive, 9);
  FlowRun b = RunSixFifty(NoiseMode::kNaive, 9);
  ASSERT_EQ(a.chain_a.size(), b.chain_a.size());
  for (std::size_t i = 0; i < a.chain_a.size(); ++i) {
    EXPECT_EQ(a.chain_a[i].block_hash, b.chain_a[i].block_hash);
  }
  FlowRun c = RunSixFifty(NoiseMode::kNaive, 10);
  EXPECT_NE(a.chain_a.back().block_hash, c.chain_a.back().block_hash);
}

TEST(FlowStats, DerivedFromReceipts) {
  std::vector<TransactionReceipt> rs(3);
  rs[0].submit_tick = 2;
  rs[0].commit_tick = 5;
  rs[0].commit_height = 1;
  rs[1].submit_tick = 3;
  rs[1].commit_tick = 9;
  rs[1].commit_height = 2;
  rs[2].submit_tick = 4;
  FlowStats s = ComputeFlowStats(rs);
  EXPECT_EQ(s.submitted, 3u);
  EXPECT_EQ(s.committed, 2u);
  EXPECT_EQ(s.rejected, 1u);
  EXPECT_EQ(s.span_ticks, 7u);
  EXPECT_DOUBLE_EQ(s.throughput, 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(s.mean_latency, 4.5);
  EXPECT_EQ(s.max_latency, 6u);
}

TEST(Clock, BatchCutByTimeoutCommitsNextTick) {
  Network net = MakeNet();
  for (int i = 0; i < 3; ++i) net.Schedule(0, WriteProposal(Write("Bob", "a", "red", 1 + i)));
  net.Run();
  for (const TransactionReceipt& r : net.receipts()) {
    EXPECT_EQ(r.phase(Phase::kOrdering).tick, 2u);
    EXPECT_EQ(*r.commit_tick, 3u);
    EXPECT_EQ(*r.commit_height, 1u);
  }
}

TEST(Clock, FullBatchCommitsNextTick) {
  Network net = MakeNet();
  for (int i = 0; i < 10; ++i) net.Schedule(0, WriteProposal(Write("Bob", "a", "red", 1 + i)));
  net.Run();
  for (const TransactionReceipt& r : net.receipts()) {
    EXPECT_EQ(*r.commit_tick, 1u);
  }
}

}  // namespace
}  // namespace edh
