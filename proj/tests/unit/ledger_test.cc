#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "edh/bench/workload.h"
#include "edh/chaincode/engine.h"
#include "edh/common/status.h"
#include "edh/ledger/block.h"
#include "edh/ledger/channel_ledger.h"
#include "edh/ledger/world_state.h"
#include "mutation_support.h"
#include "test_support.h"

namespace edh {
namespace {

using testing::Query;
using testing::Write;

LedgerTransaction WriteTx(std::string id, WriteTransaction w) {
  LedgerTransaction tx;
  tx.tx_id = std::move(id);
  tx.payload = std::move(w);
  tx.endorsements.push_back(
      Endorsement{"peer0.org1", SignProposal("peer0.org1", ProposalDigest(tx))});
  return tx;
}

LedgerTransaction QueryTx(std::string id, QueryTransaction q, double value,
                          double eps, double eps_rem = 0.0) {
  QueryOutcome o;
  o.record.key = Categorize(q).value();
  o.record.epsilon_spent = eps;
  o.record.response = PerturbedResponse{value, eps, false, id};
  o.query = std::move(q);
  o.epsilon_rem = eps_rem;
  LedgerTransaction tx;
  tx.tx_id = std::move(id);
  tx.payload = std::move(o);
  tx.endorsements.push_back(
      Endorsement{"peer0.org1", SignProposal("peer0.org1", ProposalDigest(tx))});
  return tx;
}

std::vector<Block> BuildChain(std::size_t blocks) {
  std::vector<Block> chain{MakeGenesisBlock()};
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<LedgerTransaction> txs;
    txs.push_back(WriteTx("w" + std::to_string(b),
                          Write("Bob", "laptop", "red",
                                static_cast<std::int64_t>(b % 100) + 1)));
    if (b % 2 == 1) {
      txs.push_back(QueryTx("q" + std::to_string(b), Query(Aggregate::kSum, "bob"),
                            100.0 + static_cast<double>(b), 0.125));
    }
    chain.push_back(BuildBlock(std::move(txs), chain.back()).value());
  }
  return chain;
}

TEST(ApplyWrite, SingleRecordOnEmptyState) {
  WorldState s;
  ASSERT_TRUE(s.ApplyWrite(Write("Bob", "productX", "red", 10), 1).ok());
  ASSERT_EQ(s.records().size(), 1u);
  EXPECT_EQ(EvaluateExact(Query(Aggregate::kSum), s), 10.0);
}

TEST(ApplyWrite, DefaultWorkloadHas500Records) {
  EXPECT_EQ(testing::DefaultWorkloadState().records().size(), 500u);
}

TEST(ApplyWrite, QuantityBounds) {
  WorldState s;
  EXPECT_TRUE(IsError(s.ApplyWrite(Write("Bob", "x", "red", 101), 1),
                      ErrorKind::kInvalidQuantity));
  EXPECT_TRUE(IsError(s.ApplyWrite(Write("Bob", "x", "red", 0), 1),
                      ErrorKind::kInvalidQuantity));
  EXPECT_TRUE(s.ApplyWrite(Write("Bob", "x", "red", 1), 1).ok());
  EXPECT_TRUE(s.ApplyWrite(Write("Bob", "x", "red", 100), 1).ok());
  EXPECT_EQ(s.records().size(), 2u);
}

TEST(ApplyWrite, EmptyStringsAreMissingFields) {
  WorldState s;
  EXPECT_TRUE(IsError(s.ApplyWrite(Write("", "x", "red", 1), 1),
                      ErrorKind::kMissingField));
  EXPECT_TRUE(IsError(s.ApplyWrite(Write("Bob", "", "red", 1), 1),
                      ErrorKind::kMissingField));
  EXPECT_TRUE(IsError(s.ApplyWrite(Write("Bob", "x", "", 1), 1),
                      ErrorKind::kMissingField));
  WriteTransaction w = Write("Bob", "x", "red", 1);
  w.invocation.contract_id.clear();
  EXPECT_TRUE(IsError(s.ApplyWrite(w, 1), ErrorKind::kMissingField));
  EXPECT_TRUE(s.records().empty());
}

TEST(ApplyWrite, PriorRecordsUnchanged) {
  WorldState s;
  ASSERT_TRUE(s.ApplyWrite(Write("Bob", "a", "red", 3), 1).ok());
  const WriteTransaction first = s.records()[0].tx;
  ASSERT_TRUE(s.ApplyWrite(Write("Ali", "b", "blue", 4), 2).ok());
  EXPECT_EQ(s.records()[0].tx, first);
  EXPECT_EQ(s.records()[1].height, 2u);
}

TEST(BuildBlock, LinksToGenesis) {
  const Block genesis = MakeGenesisBlock();
  EXPECT_EQ(genesis.height, 0u);
  EXPECT_EQ(genesis.prev_hash, Digest{});
  Block b = BuildBlock({WriteTx("t", Write("Bob", "a", "red", 1))}, genesis).value();
  EXPECT_EQ(b.height, 1u);
  EXPECT_EQ(b.prev_hash, genesis.block_hash);
  EXPECT_EQ(b.block_hash, ComputeBlockHash(b.height, b.prev_hash, b.txs));
  std::vector<Block> chain{genesis, b};
  EXPECT_TRUE(VerifyChain(chain));
}

TEST(BuildBlock, Deterministic) {
  const Block genesis = MakeGenesisBlock();
  auto make = [&] {
    return BuildBlock({WriteTx("t", Write("Bob", "a", "red", 1)),
                       QueryTx("q", Query(Aggregate::kCount), 3.5, 0.5)},
                      genesis)
        .value();
  };
  EXPECT_EQ(make().block_hash, make().block_hash);
}

TEST(BuildBlock, EmptyBatch) {
  EXPECT_TRUE(IsError(BuildBlock({}, MakeGenesisBlock()).status(),
                      ErrorKind::kEmptyBatch));
}

TEST(BuildBlock, TamperedByteAfterBuildFailsVerification) {
  std::vector<Block> chain = BuildChain(3);
  ASSERT_TRUE(VerifyChain(chain));
  std::get<WriteTransaction>(chain[2].txs[0].payload).customer_name[0] ^= 0x01;
  EXPECT_FALSE(VerifyChain(chain));
}

TEST(VerifyChain, FreshTenBlockChain) {
  EXPECT_TRUE(VerifyChain(BuildChain(10)));
}

TEST(VerifyChain, AlteredPrevHash) {
  std::vector<Block> chain = BuildChain(10);
  chain[5].prev_hash[0] ^= 0xff;
  EXPECT_FALSE(VerifyChain(chain));
}

TEST(VerifyChain, ReorderedBlocks) {
  std::vector<Block> chain = BuildChain(10);
  std::swap(chain[3], chain[4]);
  EXPECT_FALSE(VerifyChain(chain));
}

TEST(VerifyChain, RejectsEmptyAndNonGenesisStart) {
  EXPECT_FALSE(VerifyChain({}));
  std::vector<Block> chain = BuildChain(3);
  EXPECT_FALSE(VerifyChain(std::span<const Block>(chain).subspan(1)));
}

TEST(VerifyChain, RecomputedBlockStillBreaksNextLink) {
  std::vector<Block> chain = BuildChain(4);
  std::get<WriteTransaction>(chain[2].txs[0].payload).quantity = 42;
  chain[2].block_hash =
      ComputeBlockHash(chain[2].height, chain[2].prev_hash, chain[2].txs);
  EXPECT_FALSE(VerifyChain(chain));
}

TEST(VerifyChain, EverySingleByteMutationDetected) {
  const std::vector<Block> chain = BuildChain(4);
  std::size_t total = 0;
  for (std::size_t b = 1; b < chain.size(); ++b) {
    for (std::size_t t = 0; t < chain[b].txs.size(); ++t) {
      total += testing::TxMutator::ForEach(
          chain[b].txs[t], [&](const LedgerTransaction& mutated) {
            std::vector<Block> copy = chain;
            copy[b].txs[t] = mutated;
            EXPECT_FALSE(VerifyChain(copy)) << "block " << b << " tx " << t;
          });
    }
  }
  EXPECT_GT(total, 500u);
}

TEST(RecordQuery, AppendsInOrder) {
  WorldState s;
  for (int i = 0; i < 4; ++i) {
    QueryRecord r;
    r.key = Categorize(Query(Aggregate::kSum, "bob")).value();
    r.epsilon_spent = 0.1;
    r.response = PerturbedResponse{static_cast<double>(i), 0.1, false,
                                   "q" + std::to_string(i)};
    s.RecordQuery(r, 1.0 - 0.1 * i);
    ASSERT_EQ(s.query_log().size(), static_cast<std::size_t>(i + 1));
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(s.query_log()[i].response.query_id, "q" + std::to_string(i));
  }
  EXPECT_EQ(s.FindLatest(s.query_log()[0].key)->response.query_id, "q3");
}

TEST(RecordQuery, IdempotentPerRecordId) {
  WorldState s;
  QueryRecord r;
  r.key = Categorize(Query(Aggregate::kCount)).value();
  r.epsilon_spent = 0.5;
  r.response = PerturbedResponse{7.0, 0.5, false, "q-1"};
  s.RecordQuery(r, 0.5);
  s.RecordQuery(r, 0.5);
  EXPECT_EQ(s.query_log().size(), 1u);
  EXPECT_EQ(s.budget_snapshots().size(), 1u);
}

TEST(LedgerStateApply, SnapshotEqualsThresholdMinusLoggedSpend) {
  LedgerState st{WorldState{}, BudgetAccountant::Create(2.0).value()};
  const double eps[] = {0.25, 0.5, 0.125, 0.0625};
  for (int i = 0; i < 4; ++i) {
    ASSERT_TRUE(st.Apply(QueryTx("q" + std::to_string(i),
                                 Query(Aggregate::kSum, std::nullopt, "laptop",
                                       std::to_string(i)),
                                 10.0 + i, eps[i]),
                         1)
                    .ok());
  }
  double spent = 0.0;
  for (std::size_t i = 0; i < st.world.query_log().size(); ++i) {
    spent += st.world.query_log()[i].epsilon_spent;
    EXPECT_EQ(st.world.budget_snapshots()[i], 2.0 - spent);
  }
}

TEST(LedgerStateApply, RepeatedValueIsReuseAndFree) {
  LedgerState st{WorldState{}, BudgetAccountant::Create(1.0).value()};
  ASSERT_TRUE(st.Apply(QueryTx("q1", Query(Aggregate::kSum, "bob"), 55.5, 0.25), 3).ok());
  std::optional<QueryRecord> rec;
  ASSERT_TRUE(
      st.Apply(QueryTx("q2", Query(Aggregate::kSum, "bob"), 55.5, 0.25), 4, &rec).ok());
  ASSERT_TRUE(rec.has_value());
  EXPECT_TRUE(rec->response.reused);
  EXPECT_EQ(rec->recorded_at, 4u);
  EXPECT_EQ(st.budget.accumulated(), 0.25);
  EXPECT_EQ(st.world.query_log().size(), 2u);
  EXPECT_TRUE(st.budget.spend_log().back().reused);
}

TEST(LedgerStateApply, NewValueIsChargedAndExhaustionLeavesStateAlone) {
  LedgerState st{WorldState{}, BudgetAccountant::Create(0.5).value()};
  ASSERT_TRUE(st.Apply(QueryTx("q1", Query(Aggregate::kSum, "bob"), 1.0, 0.25), 1).ok());
  ASSERT_TRUE(st.Apply(QueryTx("q2", Query(Aggregate::kSum, "bob"), 2.0, 0.25), 1).ok());
  const std::vector<std::uint8_t> before = st.world.Serialize();
  const BudgetAccountant budget_before = st.budget;
  EXPECT_TRUE(IsError(
      st.Apply(QueryTx("q3", Query(Aggregate::kSum, "ali"), 3.0, 0.25), 2),
      ErrorKind::kExhausted));
  EXPECT_EQ(st.world.Serialize(), before);
  EXPECT_EQ(st.budget, budget_before);
}

TEST(LedgerStateApply, ExactOutcomesAreNotLogged) {
  LedgerState st{WorldState{}, BudgetAccountant::Create(1.0).value()};
  ASSERT_TRUE(st.Apply(QueryTx("q1", Query(Aggregate::kSum), 9.0, 0.0), 1).ok());
  EXPECT_TRUE(st.world.query_log().empty());
  EXPECT_TRUE(st.budget.spend_log().empty());
}

TEST(ChannelLedger, RejectsUnlinkedAndTamperedBlocks) {
  ChannelLedger ledger = ChannelLedger::Create("c", 1.0).value();
  const std::vector<Block> chain = BuildChain(3);
  EXPECT_TRUE(IsError(ledger.Append(chain[2]).status(),
                      ErrorKind::kValidationFailure));
  Block tampered = chain[1];
  std::get<WriteTransaction>(tampered.txs[0].payload).quantity += 1;
  EXPECT_TRUE(IsError(ledger.Append(tampered).status(),
                      ErrorKind::kValidationFailure));
  ASSERT_TRUE(ledger.Append(chain[1]).ok());
  EXPECT_EQ(ledger.height(), 1u);
}

TEST(ChannelLedger, PerTxFailureDoesNotStopBlock) {
  ChannelLedger ledger = ChannelLedger::Create("c", 1.0).value();
  Block b = BuildBlock({WriteTx("bad", Write("Bob", "a", "red", 500)),
                        WriteTx("good", Write("Bob", "a", "red", 5))},
                       ledger.tip())
                .value();
  BlockCommitResult r = ledger.Append(b).value();
  ASSERT_EQ(r.tx_status.size(), 2u);
  EXPECT_TRUE(IsError(r.tx_status[0], ErrorKind::kInvalidQuantity));
  EXPECT_TRUE(r.tx_status[1].ok());
  EXPECT_EQ(ledger.state().world.records().size(), 1u);
}

TEST(ReplayDeterminism, SameBlocksSameSerialization) {
  const std::vector<Block> chain = BuildChain(12);
  ChannelLedger a = ReplayChain("c", 4.0, chain).value();
  ChannelLedger b = ReplayChain("c", 4.0, chain).value();
  EXPECT_EQ(a.state().world.Serialize(), b.state().world.Serialize());
  EXPECT_EQ(a.state().budget, b.state().budget);
  EXPECT_EQ(a.state().world.records().size(), 12u);
  EXPECT_EQ(a.state().world.query_log().size(), 6u);
}

TEST(ReplayDeterminism, RejectsBrokenChain) {
  std::vector<Block> chain = BuildChain(3);
  chain[2].prev_hash[3] ^= 1;
  EXPECT_TRUE(IsError(ReplayChain("c", 1.0, chain).status(),
                      ErrorKind::kValidationFailure));
}

TEST(AppendOnly, PrefixesSurviveFurtherBlocks) {
  const std::vector<Block> chain = BuildChain(10);
  ChannelLedger ledger = ChannelLedger::Create("c", 4.0).value();
  std::vector<CommittedWrite> seen_records;
  std::vector<QueryRecord> seen_log;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    ASSERT_TRUE(ledger.Append(chain[i]).ok());
    const WorldState& w = ledger.state().world;
    for (std::size_t k = 0; k < seen_records.size(); ++k) {
      EXPECT_EQ(w.records()[k].tx, seen_records[k].tx);
    }
    for (std::size_t k = 0; k < seen_log.size(); ++k) {
      EXPECT_EQ(w.query_log()[k], seen_log[k]);
    }
    seen_records = w.records();
    seen_log = w.query_log();
  }
}

}  // namespace
}  // namespace edh
