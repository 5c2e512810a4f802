// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edh/adversary/experiments.h"
#include "edh/bench/config.h"
#include "edh/bench/scenario.h"
#include "edh/budget/accountant.h"
#include "edh/chaincode/engine.h"
#include "edh/dp/dp_checker.h"
#include "edh/dp/laplace.h"
#include "edh/ledger/block.h"
#include "edh/ledger/ledger_io.h"
#include "json.hpp"
#include "mutation_support.h"
#include "test_support.h"

namespace {

using namespace edh;
using edh::testing::DefaultWorkloadState;
using edh::testing::Query;
using edh::testing::SampleVariance;
using edh::testing::Write;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

ScenarioConfig LoadConfig(const std::string& name) {
  return LoadScenarioConfig(std::filesystem::path(EDH_SOURCE_DIR) / "configs" /
                            (name + ".json"))
      .value();
}

// Neighboring ledgers: D' = D plus one purchase of the maximum quantity.
void Ac1(Verdict& v) {
  std::vector<WriteTransaction> writes;
  for (int i = 1; i <= 100; ++i) writes.push_back(Write("bob", "phone", "red", i));
  const WorldState d = edh::testing::StateOf(writes);
  writes.push_back(Write("claire", "phone", "red", kMaxQuantity));
  const WorldState d_prime = edh::testing::StateOf(writes);
  const QueryTransaction q = Query(Aggregate::kSum, std::nullopt, "phone");
  const double a = EvaluateExact(q, d);
  const double b = EvaluateExact(q, d_prime);
  v.Check(b - a == 100.0, "neighbor difference is 100");

  const SensitivitySpec spec{Aggregate::kSum, 100.0};
  constexpr int kSamples = 100000;
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto start = Clock::now();
    const double lambda = 100.0 / eps;
    const double lo = a - 6 * lambda, hi = b + 6 * lambda;
    const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / lambda));
    Histogram hx(lo, hi, bins), hy(lo, hi, bins);
    NoiseStream sx(DeriveSeed(1000, "ac1/x/" + std::to_string(eps)));
    NoiseStream sy(DeriveSeed(1000, "ac1/y/" + std::to_string(eps)));
    for (int i = 0; i < kSamples; ++i) {
      hx.Add(Perturb(a, eps, spec, sx).value());
      hy.Add(Perturb(b, eps, spec, sy).value());
    }
    const DpCheckResult r = CheckEmpiricalDp(hx, hy, eps).value();
    const double secs = Seconds(start);
    v.detail << " eps=" << eps << " slots=" << r.slots_checked
             << " worst_z=" << r.worst_z << " t=" << secs << "s";
    v.Check(r.satisfied, "dp inequality at eps " + std::to_string(eps));
    v.Check(r.slots_checked >= 3, "enough populated slots");
    v.Check(secs < 30.0, "runtime under 30 s");
  }
}

// Oracle: the same inverse-CDF written in long double from raw engine bits.
long double OracleLaplace(std::uint64_t bits, long double lambda) {
  const long double u = (static_cast<long double>(bits >> 12) + 0.5L) / 4503599627370496.0L;
  const long double d = u - 0.5L;
  if (d == 0) return 0;
  return -lambda * (d > 0 ? 1 : -1) * std::log1p(-2.0L * std::fabs(d));
}

void Ac2(Verdict& v) {
  constexpr int kDraws = 100000;
  const LaplaceParams params{0.0, 100.0};
  NoiseStream stream(2024);
  std::vector<double> draws;
  draws.reserve(kDraws);
  for (int i = 0; i < kDraws; ++i) draws.push_back(LaplaceSample(params, stream));
  double mean = 0;
  for (double x : draws) mean += x;
  mean /= kDraws;
  const double var = SampleVariance(draws);
  v.detail << " mean=" << mean << " var=" << var;
  v.Check(std::fabs(mean) <= 2.0, "|mean| <= 2");
  v.Check(std::fabs(var - 20000.0) <= 0.05 * 20000.0, "variance within 5%");

  std::size_t mismatches = 0;
  for (std::uint64_t seed : {1ull, 7ull, 2024ull, 0xdeadbeefull}) {
    NoiseStream s(seed);
    std::mt19937_64 raw(seed);
    for (int i = 0; i < 20000; ++i) {
      const double got = LaplaceSample(params, s);
      const long double want = OracleLaplace(raw(), 100.0L);
      // Same inverse CDF: agreement to the double rounding of the oracle.
      if (std::fabs(static_cast<long double>(got) - want) >
          1e-12L * std::max(1.0L, std::fabs(want))) {
        ++mismatches;
      }
    }
  }
  v.detail << " oracle_mismatches=" << mismatches;
  v.Check(mismatches == 0, "per-draw oracle match");
}

void Ac3(Verdict& v) {
  const ScenarioConfig cfg = LoadConfig("error-sweep");
  const std::vector<double> eps = {1, 2, 3, 4, 5};
  const std::vector<SweepPoint> pts = RunErrorSweep(cfg, eps).value();
  v.Check(pts.size() == 5, "five sweep points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const SweepPoint& p = pts[i];
    const double z = (p.mean_relative_error - p.analytic_expectation) / p.standard_error;
    v.detail << " eps_t=" << p.epsilon_t << ":err=" << p.mean_relative_error
             << ",exp=" << p.analytic_expectation << ",z=" << z;
    v.Check(p.samples == 150, "150 samples");
    v.Check(std::fabs(z) <= 3.0, "within 3 SE at eps_t " + std::to_string(p.epsilon_t));
    if (i > 0) {
      v.Check(p.mean_relative_error < pts[i - 1].mean_relative_error, "strictly decreasing");
    }
  }
}

void Ac4(Verdict& v) {
  const ScenarioReport r = RunScenario(LoadConfig("paper-fig5")).value();
  v.detail << " naive=" << r.naive.epsilon_sum << " edh=" << r.edh.epsilon_sum
           << " savings=" << r.savings_percent << "%";
  v.Check(r.edh.queries.size() == 155, "155 queries");
  v.Check(std::fabs(r.naive.epsilon_sum - 8.9) <= 0.05, "naive sum 8.9");
  v.Check(std::fabs(r.edh.epsilon_sum - 5.7) <= 0.05, "edh sum 5.7");
  v.Check(std::fabs(r.savings_percent - 35.96) <= 1.0, "savings 35.96%");

  // Property form on random schedules. Epsilons are multiples of 1/64 so
  // every partial sum is exact and equality is bitwise.
  std::mt19937_64 rng(404);
  std::size_t mismatches = 0;
  for (int schedule = 0; schedule < 100; ++schedule) {
    WorkloadConfig wc;
    wc.seed = rng();
    wc.n_writes = 100 + rng() % 200;
    wc.n_queries = 20 + rng() % 130;
    wc.repeat_ratio = std::uniform_real_distribution<double>(0.0, 0.8)(rng);
    wc.aggregates = {Aggregate::kSum, Aggregate::kCount};
    wc.epsilon_t = 1000.0;
    wc.epsilon.kind = EpsilonStrategy::Kind::kRange;
    wc.epsilon.min = 1.0 / 64;
    wc.epsilon.step = 1.0 / 64;
    wc.epsilon.max = 8.0 / 64;
    const Workload w = GenerateWorkload(wc).value();
    WorldState naive_state = edh::testing::StateOf(w.writes);
    WorldState edh_state = naive_state;
    BudgetAccountant naive_acct = BudgetAccountant::Create(wc.epsilon_t).value();
    BudgetAccountant edh_acct = naive_acct;
    Chaincode naive({NoiseMode::kNaive, 100.0});
    Chaincode edh({NoiseMode::kEdh, 100.0});
    NoiseStream s1(wc.seed), s2(wc.seed + 1);
    double repeat_eps = 0;
    for (std::size_t i = 0; i < w.queries.size(); ++i) {
      const ScheduledQuery& sq = w.queries[i];
      const std::string id = "q-" + std::to_string(i);
      (void)naive.AnswerQuery(sq.query, id, naive_state, naive_acct, sq.epsilon_f, s1).value();
      (void)edh.AnswerQuery(sq.query, id, edh_state, edh_acct, sq.epsilon_f, s2).value();
      if (sq.is_repeat) repeat_eps += sq.epsilon_f;
    }
    if (edh_acct.accumulated() != naive_acct.accumulated() - repeat_eps) ++mismatches;
  }
  v.detail << " schedule_mismatches=" << mismatches;
  v.Check(mismatches == 0, "edh = naive - repeats on 100 schedules");
}

void Ac5(Verdict& v) {
  std::mt19937_64 rng(5005);
  std::size_t overdrawn = 0, wrong_decisions = 0, non_atomic = 0, rejections = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    // Budget and spends in hundredths, so the exact decision is integral.
    const std::int64_t limit = 1 + rng() % 1000;
    const double eps_t = static_cast<double>(limit) / 100.0;
    BudgetAccountant acct = BudgetAccountant::Create(eps_t).value();
    std::int64_t spent = 0;
    for (int step = 0; step < 400; ++step) {
      const std::int64_t units = 1 + rng() % 50;
      const double eps = static_cast<double>(units) / 100.0;
      const BudgetAccountant before = acct;
      const absl::Status st = acct.TrySpend(eps, "q" + std::to_string(step), "analyst");
      const bool fits = spent + units <= limit;
      if (st.ok() != fits) ++wrong_decisions;
      if (st.ok()) {
        spent += units;
      } else {
        ++rejections;
        if (!(acct == before)) ++non_atomic;
        break;
      }
      // Floating tolerance of the running sum only.
      if (acct.accumulated() > eps_t + 1e-9) ++overdrawn;
    }
  }
  v.detail << " rejections=" << rejections << " overdrawn=" << overdrawn
           << " wrong_decisions=" << wrong_decisions << " non_atomic=" << non_atomic;
  v.Check(overdrawn == 0, "never above epsilon_t");
  v.Check(wrong_decisions == 0, "admission matches exact arithmetic");
  v.Check(non_atomic == 0, "rejection leaves state unchanged");
  v.Check(rejections > 9000, "most trials reach a rejection");

  // Chaincode level: an Exhausted query leaves world state untouched.
  WorldState state = DefaultWorkloadState();
  BudgetAccountant acct = BudgetAccountant::Create(0.3).value();
  Chaincode cc({NoiseMode::kEdh, 100.0});
  NoiseStream s(9);
  (void)cc.AnswerQuery(Query(Aggregate::kSum, "bob"), "a", state, acct, 0.2, s).value();
  const std::vector<std::uint8_t> snapshot = state.Serialize();
  const BudgetAccountant acct_before = acct;
  const auto r = cc.AnswerQuery(Query(Aggregate::kSum, "alice"), "b", state, acct, 0.2, s);
  v.Check(!r.ok() && IsError(r.status(), ErrorKind::kExhausted), "second query exhausted");
  v.Check(state.Serialize() == snapshot && acct == acct_before, "chaincode atomicity");
}

void Ac6(Verdict& v) {
  const WorldState data = DefaultWorkloadState();
  std::vector<WriteTransaction> writes;
  for (const CommittedWrite& w : data.records()) writes.push_back(w.tx);
  std::vector<QueryTransaction> queries = {
      Query(Aggregate::kSum, "bob"),           Query(Aggregate::kSum, "alice"),
      Query(Aggregate::kSum, std::nullopt, "phone"),
      Query(Aggregate::kCount, std::nullopt, std::nullopt, "red"),
      Query(Aggregate::kSum, "claire", "laptop"), Query(Aggregate::kSum)};
  NetworkCompositionConfig nc;
  nc.mode = NoiseMode::kEdh;
  nc.repeats = 50;
  nc.seed = 66;
  const NetworkCompositionResult edh = RunNetworkComposition(writes, queries, nc).value();
  v.detail << " edh_max_distinct=" << edh.max_distinct_values
           << " answered=" << edh.answered;
  v.Check(edh.max_distinct_values == 1, "one distinct value per category");
  v.Check(edh.answered == queries.size() * 50 * 2, "every query answered");
  v.Check(edh.chains_identical, "peer chains identical");
  for (const CategoryEstimate& c : edh.report.categories) {
    v.Check(c.distinct_values == 1 && c.samples == 100, "category " + c.key.ToString());
  }

  const CompositionVarianceResult naive =
      RunCompositionVarianceTrials(data, queries[0], 1.0, 50, 3000, 67).value();
  const double rel = naive.ratio / naive.expected_ratio;
  v.detail << " naive_ratio=" << naive.ratio << " expected=" << naive.expected_ratio;
  v.Check(std::fabs(rel - 1.0) <= 0.2, "naive variance shrinks to 1/(2 repeats)");
}

void Ac7(Verdict& v) {
  const WorldState data = DefaultWorkloadState();
  const LinkingTrialsResult off =
      RunLinkingTrials(data, 0, std::nullopt, 100, 5.0, 71).value();
  bool exact = off.success_rate == 1.0;
  for (double e : off.errors) exact = exact && e == 0.0;
  v.Check(exact, "exact recovery without DP");

  const LinkingTrialsResult on = RunLinkingTrials(data, 0, 1.0, 10000, 5.0, 72).value();
  const double expected = 1.0 - std::exp(-0.05);
  v.detail << " dp_off_rate=" << off.success_rate << " rate=" << on.success_rate
           << " expected=" << expected;
  v.Check(on.trials == 10000, "10^4 trials");
  v.Check(std::fabs(on.success_rate - expected) <= 0.02, "success rate within 0.02");
}

void Ac8(Verdict& v) {
  const ScenarioConfig cfg = LoadConfig("default");
  const auto start = Clock::now();
  const Workload workload = GenerateWorkload(cfg.workload).value();
  const ModeRun run = RunMode(cfg, workload, NoiseMode::kEdh).value();
  const double secs = Seconds(start);
  std::size_t txs = 0;
  for (const Block& b : run.chain) txs += b.txs.size();
  v.detail << " committed=" << run.flow.committed << " chain_txs=" << txs
           << " t=" << secs << "s";
  v.Check(run.flow.committed == 650 && txs == 650, "650 transactions committed");
  v.Check(run.replicas_consistent, "identical chain hashes on both peers");
  v.Check(VerifyChain(run.chain), "chain verifies");
  v.Check(secs < 60.0, "run under 60 s");

  // Every single-byte mutation of every committed transaction.
  std::size_t mutations = 0, missed = 0;
  std::vector<Block> chain = run.chain;
  for (std::size_t h = 1; h < chain.size(); ++h) {
    for (std::size_t t = 0; t < chain[h].txs.size(); ++t) {
      const LedgerTransaction original = chain[h].txs[t];
      mutations += edh::testing::TxMutator::ForEach(original, [&](const LedgerTransaction& m) {
        chain[h].txs[t] = m;
        if (VerifyChain(chain)) ++missed;
      });
      chain[h].txs[t] = original;
    }
    // Block header fields.
    const Block original = chain[h];
    for (std::size_t i = 0; i < sizeof(Digest); ++i) {
      chain[h].prev_hash[i] ^= 0x01;
      ++mutations;
      if (VerifyChain(chain)) ++missed;
      chain[h].prev_hash = original.prev_hash;
      chain[h].block_hash[i] ^= 0x01;
      ++mutations;
      if (VerifyChain(chain)) ++missed;
      chain[h].block_hash = original.block_hash;
    }
    for (std::size_t i = 0; i < sizeof(std::uint64_t); ++i) {
      chain[h].height ^= std::uint64_t{1} << (8 * i);
      ++mutations;
      if (VerifyChain(chain)) ++missed;
      chain[h].height = original.height;
    }
  }
  v.detail << " struct_mutations=" << mutations << " missed=" << missed;
  v.Check(missed == 0 && mutations > 50000, "every struct mutation detected");

  // Exported form: every byte of a write line, a query line and the last line,
  // plus random positions across all transaction lines.
  std::stringstream text;
  v.Check(ExportLedgerJsonl(cfg.topology.channel_id, cfg.workload.epsilon_t, run.chain, text).ok(),
          "export");
  const std::string jsonl = text.str();
  const std::size_t body = jsonl.find('\n') + 1;
  std::vector<std::size_t> positions;
  auto add_line = [&](std::size_t begin) {
    for (std::size_t i = begin; i < jsonl.size() && jsonl[i] != '\n'; ++i) positions.push_back(i);
  };
  add_line(body);
  add_line(jsonl.find("\"type\":\"query\"") == std::string::npos
               ? body
               : jsonl.rfind('\n', jsonl.find("\"type\":\"query\"")) + 1);
  add_line(jsonl.rfind('\n', jsonl.size() - 2) + 1);
  std::mt19937_64 rng(808);
  for (int i = 0; i < 1000; ++i) positions.push_back(body + rng() % (jsonl.size() - body));
  std::size_t byte_mutations = 0, byte_missed = 0;
  std::string copy = jsonl;
  for (std::size_t i : positions) {
    if (jsonl[i] == '\n') continue;
    copy[i] = static_cast<char>(jsonl[i] ^ 0x01);
    ++byte_mutations;
    std::istringstream in(copy);
    const auto imported = ImportLedgerJsonl(in);
    if (imported.ok() && VerifyChain(imported->chain) &&
        imported->chain.back().block_hash == run.chain.back().block_hash) {
      ++byte_missed;
    }
    copy[i] = jsonl[i];
  }
  v.detail << " jsonl_mutations=" << byte_mutations << " missed=" << byte_missed;
  v.Check(byte_missed == 0, "every exported byte mutation detected");
}

std::string Normalize(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  const auto e = s.find_last_not_of(" \t\r\n\f\v");
  s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void Ac9(Verdict& v) {
  const ScenarioConfig cfg = LoadConfig("default");
  const Workload workload = GenerateWorkload(cfg.workload).value();
  const ModeRun run = RunMode(cfg, workload, NoiseMode::kEdh).value();
  std::stringstream text;
  (void)ExportLedgerJsonl(cfg.topology.channel_id, cfg.workload.epsilon_t, run.chain, text);

  // Independent reading of the export: only the write payloads matter.
  struct Row {
    std::string customer, product, color;
    std::int64_t quantity;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(text, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    if (j.value("type", "") != "write") continue;
    const nlohmann::json& w = j.at("write");
    rows.push_back({w.at("customer_name"), w.at("product_name"), w.at("color"),
                    w.at("quantity").get<std::int64_t>()});
  }
  v.Check(rows.size() == 500, "500 exported writes");

  std::vector<std::string> customers = cfg.workload.customers;
  std::vector<std::string> products = cfg.workload.products;
  std::vector<std::string> colors = cfg.workload.colors;
  customers.push_back("  BOB ");
  customers.push_back("nobody");
  products.push_back("Phone");
  colors.push_back("purple");

  std::mt19937_64 rng(909);
  auto pick = [&](const std::vector<std::string>& pool) -> std::optional<std::string> {
    const std::size_t i = rng() % (pool.size() + 1);
    if (i == pool.size()) return std::nullopt;
    return pool[i];
  };
  std::size_t mismatches = 0, nonzero = 0;
  for (int i = 0; i < 1000; ++i) {
    QueryTransaction q = Query(rng() % 2 ? Aggregate::kSum : Aggregate::kCount,
                               pick(customers), pick(products), pick(colors));
    double expected = 0;
    for (const Row& r : rows) {
      const auto& p = q.predicate;
      const bool match =
          (!p.customer_name || Normalize(*p.customer_name) == Normalize(r.customer)) &&
          (!p.product_name || Normalize(*p.product_name) == Normalize(r.product)) &&
          (!p.color || Normalize(*p.color) == Normalize(r.color));
      if (match) expected += q.aggregate == Aggregate::kSum ? static_cast<double>(r.quantity) : 1.0;
    }
    const double got = EvaluateExact(q, run.world);
    if (got != expected) ++mismatches;
    if (expected != 0) ++nonzero;
  }
  v.detail << " predicates=1000 nonzero=" << nonzero << " mismatches=" << mismatches;
  v.Check(mismatches == 0, "zero mismatches");
}

ChaincodeCounters CountersFor(std::size_t n, const WorldState& ledger) {
  WorkloadConfig wc;
  wc.seed = 1010;
  wc.n_queries = n;
  wc.repeat_ratio = 0.9;
  wc.aggregates = {Aggregate::kSum, Aggregate::kCount};
  wc.epsilon.kind = EpsilonStrategy::Kind::kFixed;
  wc.epsilon.value = 0.01;
  wc.epsilon_t = 1e6;
  const Workload w = GenerateWorkload(wc).value();
  WorldState state = ledger;
  BudgetAccountant acct = BudgetAccountant::Create(wc.epsilon_t).value();
  Chaincode cc({NoiseMode::kEdh, 100.0});
  NoiseStream s(1011);
  for (std::size_t i = 0; i < w.queries.size(); ++i) {
    (void)cc.AnswerQuery(w.queries[i].query, "q-" + std::to_string(i), state, acct,
                         w.queries[i].epsilon_f, s)
        .value();
  }
  return cc.counters();
}

void Ac10(Verdict& v) {
  const WorldState ledger = DefaultWorkloadState();
  const ChaincodeCounters c1 = CountersFor(1000, ledger);
  const ChaincodeCounters c2 = CountersFor(2000, ledger);
  auto per = [](std::uint64_t count, double n) { return static_cast<double>(count) / n; };
  const std::vector<std::pair<std::string, std::pair<double, double>>> ratios = {
      {"probes", {per(c1.cache_probes, 1000), per(c2.cache_probes, 2000)}},
      {"evaluations", {per(c1.exact_evaluations, 1000), per(c2.exact_evaluations, 2000)}},
      {"scanned", {per(c1.records_scanned, 1000), per(c2.records_scanned, 2000)}}};
  for (const auto& [name, r] : ratios) {
    const double change = std::fabs(r.second - r.first) / r.first;
    v.detail << " " << name << "/N=" << r.first << "->" << r.second;
    v.Check(r.first > 0 && change < 0.01, name + " per query changes < 1%");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"AC1 dp-inequality", Ac1},     {"AC2 laplace-calibration", Ac2},
      {"AC3 error-trend", Ac3},       {"AC4 budget-savings", Ac4},
      {"AC5 threshold-safety", Ac5},  {"AC6 composition-defense", Ac6},
      {"AC7 linking-calibration", Ac7}, {"AC8 ledger-integrity", Ac8},
      {"AC9 exactness-oracle", Ac9},  {"AC10 linear-cost", Ac10}};
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    const auto start = Clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %s (%.1fs)%s\n", name.c_str(), v.pass ? "PASS" : "FAIL", Seconds(start),
                v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
