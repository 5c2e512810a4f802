#include "edh/bench/scenario.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "edh/adversary/experiments.h"

namespace edh {
namespace {

constexpr char kRetailer[] = "retailer";

std::vector<std::string> Clients(const Workload& workload) {
  std::set<std::string> ids = {kRetailer};
  for (const ScheduledQuery& q : workload.queries) ids.insert(q.query.requester_id);
  return {ids.begin(), ids.end()};
}

QueryTransaction TargetQuery(const WriteTransaction& target) {
  QueryTransaction q;
  q.invocation = QueryInvocation();
  q.predicate = {target.customer_name, target.product_name, target.color};
  q.aggregate = Aggregate::kSum;
  q.requester_id = "competitor";
  return q;
}

}  // namespace

absl::StatusOr<ModeRun> RunMode(const ScenarioConfig& config,
                                const Workload& workload, NoiseMode mode) {
  const WorkloadConfig& wc = config.workload;
  EDH_ASSIGN_OR_RETURN(
      Network net,
      Network::Create(MakeNetworkConfig(config, mode, Clients(workload))));
  const std::string& channel = config.topology.channel_id;

  for (std::size_t i = 0; i < workload.writes.size(); ++i) {
    net.Schedule(i / wc.writes_per_tick,
                 Proposal{absl::StrFormat("w-%05d", i), channel, kRetailer,
                          workload.writes[i], 0.0});
  }
  net.Run();
  const std::uint64_t start = net.now();
  std::vector<std::string> ids;
  ids.reserve(workload.queries.size());
  for (std::size_t i = 0; i < workload.queries.size(); ++i) {
    const ScheduledQuery& sq = workload.queries[i];
    ids.push_back(net.Schedule(
        start + i / wc.queries_per_tick,
        Proposal{absl::StrFormat("q-%05d", i), channel, sq.query.requester_id,
                 sq.query, sq.epsilon_f}));
  }
  net.Run();

  ModeRun run;
  run.mode = mode;
  run.receipts = net.receipts();
  const ChannelSpec& spec = *net.channel(channel);
  const ChannelLedger& ledger = *net.peer(spec.members.front())->ledger(channel);
  run.world = ledger.state().world;
  run.chain = ledger.chain();
  run.spend_log = ledger.state().budget.spend_log();
  run.replicas_consistent = true;
  const std::vector<std::uint8_t> reference = run.world.Serialize();
  for (const std::string& member : spec.members) {
    const ChannelLedger& other = *net.peer(member)->ledger(channel);
    if (other.tip().block_hash != ledger.tip().block_hash ||
        other.state().world.Serialize() != reference) {
      run.replicas_consistent = false;
    }
  }
  for (const Peer& p : net.peers()) {
    const ChaincodeCounters& c = p.counters();
    run.counters.queries += c.queries;
    run.counters.cache_probes += c.cache_probes;
    run.counters.exact_evaluations += c.exact_evaluations;
    run.counters.records_scanned += c.records_scanned;
    run.counters.fresh_answers += c.fresh_answers;
    run.counters.reused_answers += c.reused_answers;
  }

  RunningSum cumulative;
  double error_sum = 0.0;
  for (std::size_t i = 0; i < workload.queries.size(); ++i) {
    const ScheduledQuery& sq = workload.queries[i];
    const TransactionReceipt& r = *net.receipt(ids[i]);
    QueryResult qr;
    qr.index = i;
    qr.tx_id = r.tx_id;
    qr.key = sq.key;
    qr.requester_id = sq.query.requester_id;
    qr.epsilon_requested = sq.epsilon_f;
    qr.is_repeat = sq.is_repeat;
    qr.exact = EvaluateExact(sq.query, run.world);
    qr.committed = r.committed();
    qr.rejection = r.rejection_reason;
    if (r.query_record) {
      const QueryRecord& rec = *r.query_record;
      qr.reused = rec.response.reused;
      qr.epsilon_charged = rec.response.reused ? 0.0 : rec.epsilon_spent;
      qr.noisy = rec.response.value;
    } else if (qr.committed && mode == NoiseMode::kExact) {
      qr.noisy = qr.exact;
    }
    if (qr.noisy) {
      absl::StatusOr<double> re = RelativeError(qr.exact, *qr.noisy);
      if (re.ok()) {
        qr.relative_error = *re;
        error_sum += *re;
        ++run.error_samples;
      }
    }
    cumulative.Add(qr.epsilon_charged);
    run.epsilon_curve.push_back(cumulative.value());
    run.queries.push_back(std::move(qr));
  }
  run.epsilon_sum = cumulative.value();
  run.mean_relative_error =
      run.error_samples == 0 ? 0.0
                             : error_sum / static_cast<double>(run.error_samples);
  run.flow = ComputeFlowStats(run.receipts);
  run.throughput = ThroughputSeries(run.receipts);
  return run;
}

absl::StatusOr<AttackReport> RunAttack(const ScenarioConfig& config,
                                       const Workload& workload,
                                       const WorldState& data, AttackKind kind,
                                       NoiseMode mode) {
  const AttackConfig& ac = config.attacks;
  if (ac.target_record >= data.records().size()) {
    return MakeError(ErrorKind::kConfigInvalid,
                     "attack target_record is outside the ledger");
  }
  const WriteTransaction& target = data.records()[ac.target_record].tx;
  const QueryTransaction q = TargetQuery(target);
  const std::uint64_t seed = DeriveSeed(
      config.workload.seed,
      absl::StrCat("attack/", AsAbsl(AttackKindName(kind)), "/",
                   AsAbsl(NoiseModeName(mode))));

  switch (kind) {
    case AttackKind::kLinking: {
      WorldState state = data;
      EDH_ASSIGN_OR_RETURN(BudgetAccountant acct,
                           BudgetAccountant::Create(config.workload.epsilon_t));
      Chaincode cc({mode, config.max_contribution});
      NoiseStream rng(seed);
      EDH_ASSIGN_OR_RETURN(QueryAnswer answer,
                           cc.AnswerQuery(q, "link-0", state, acct, ac.epsilon,
                                          rng));
      EDH_ASSIGN_OR_RETURN(BackgroundKnowledge bk,
                           KnowledgeExcluding(data.records(), ac.target_record));
      const Observation obs{q, answer.response};
      EDH_ASSIGN_OR_RETURN(AttackReport report,
                           LinkingAttack(std::span(&obs, 1), bk, ac.tolerance));
      ScoreReport(report, static_cast<double>(target.quantity));
      return report;
    }
    case AttackKind::kAveraging: {
      AveragingOptions opts;
      opts.epsilon_t = config.workload.epsilon_t;
      opts.epsilon_f = ac.epsilon;
      opts.mode = mode;
      opts.max_contribution = config.max_contribution;
      opts.seed = seed;
      opts.tolerance = ac.tolerance;
      return RepeatedQueryAveraging(q, ac.repeats, data, opts);
    }
    case AttackKind::kComposition: {
      NetworkCompositionConfig nc;
      nc.mode = mode;
      nc.epsilon_t = config.workload.epsilon_t;
      nc.epsilon_f = ac.epsilon;
      nc.repeats = ac.repeats;
      nc.seed = seed;
      nc.writes_per_tick = config.workload.writes_per_tick;
      std::vector<WriteTransaction> writes = workload.writes;
      EDH_ASSIGN_OR_RETURN(NetworkCompositionResult result,
                           RunNetworkComposition(writes, std::span(&q, 1), nc));
      result.report.tolerance = ac.tolerance;
      ScoreReport(result.report, EvaluateExact(q, data));
      return result.report;
    }
  }
  return MakeError(ErrorKind::kInvalidArgument, "unknown attack kind");
}

absl::StatusOr<ScenarioReport> RunScenario(const ScenarioConfig& config) {
  EDH_ASSIGN_OR_RETURN(Workload workload, GenerateWorkload(config.workload));
  ScenarioReport report;
  report.config = config;
  EDH_ASSIGN_OR_RETURN(report.naive, RunMode(config, workload, NoiseMode::kNaive));
  EDH_ASSIGN_OR_RETURN(report.edh, RunMode(config, workload, NoiseMode::kEdh));
  report.savings_percent =
      SavingsPercent(report.naive.epsilon_sum, report.edh.epsilon_sum);
  for (AttackKind kind : config.attacks.kinds) {
    for (NoiseMode mode : {NoiseMode::kNaive, NoiseMode::kEdh}) {
      EDH_ASSIGN_OR_RETURN(
          AttackReport r,
          RunAttack(config, workload, report.edh.world, kind, mode));
      report.attacks.push_back({mode, std::move(r)});
    }
  }
  return report;
}

absl::StatusOr<std::vector<SweepPoint>> RunErrorSweep(
    const ScenarioConfig& config, std::span<const double> epsilon_t_values) {
  std::vector<SweepPoint> points;
  for (double eps_t : epsilon_t_values) {
    ScenarioConfig cfg = config;
    cfg.workload.epsilon_t = eps_t;
    EDH_ASSIGN_OR_RETURN(Workload workload, GenerateWorkload(cfg.workload));
    EDH_ASSIGN_OR_RETURN(ModeRun run, RunMode(cfg, workload, NoiseMode::kEdh));
    std::vector<double> exact;
    std::vector<double> lambda;
    double eps_total = 0.0;
    for (const QueryResult& q : run.queries) {
      if (!q.relative_error) continue;
      const SensitivitySpec spec{q.key.aggregate, cfg.max_contribution};
      EDH_ASSIGN_OR_RETURN(double delta_f, Sensitivity(spec));
      exact.push_back(q.exact);
      lambda.push_back(delta_f / q.epsilon_requested);
      eps_total += q.epsilon_requested;
    }
    const ErrorExpectation expect = AnalyticErrorExpectation(exact, lambda);
    SweepPoint p;
    p.epsilon_t = eps_t;
    p.samples = run.error_samples;
    p.mean_epsilon_f =
        exact.empty() ? 0.0 : eps_total / static_cast<double>(exact.size());
    p.mean_relative_error = run.mean_relative_error;
    p.analytic_expectation = expect.mean;
    p.standard_error = expect.standard_error;
    p.accuracy = Accuracy(run.mean_relative_error);
    points.push_back(p);
  }
  return points;
}

}  // namespace edh
