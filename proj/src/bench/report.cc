#include "edh/bench/report.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "edh/common/format.h"
#include "edh/ledger/ledger_io.h"
#include "json.hpp"

namespace edh {
namespace {

using nlohmann::ordered_json;

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) {
    return MakeError(ErrorKind::kIoFailure,
                     absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

absl::Status EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    return MakeError(ErrorKind::kIoFailure,
                     absl::StrCat("cannot create ", dir.string()));
  }
  return absl::OkStatus();
}

std::string Tick(const PhaseOutcome& p) {
  return p.state == PhaseState::kPending ? "" : std::to_string(p.tick);
}

std::string ReceiptStatus(const TransactionReceipt& r) {
  if (r.committed()) return "committed";
  for (Phase phase : {Phase::kProposal, Phase::kEndorsement, Phase::kOrdering,
                      Phase::kValidation}) {
    if (r.phase(phase).state == PhaseState::kFailed) {
      return absl::StrCat("rejected_", AsAbsl(PhaseName(phase)));
    }
  }
  return "pending";
}

void AppendReceipts(std::ostringstream& out, const ModeRun& run) {
  const std::string mode(NoiseModeName(run.mode));
  for (const TransactionReceipt& r : run.receipts) {
    out << mode << ',' << r.tx_id << ',' << (r.is_query ? "query" : "write")
        << ',' << CsvField(r.client_id) << ',' << r.submit_tick << ','
        << Tick(r.phase(Phase::kProposal)) << ','
        << Tick(r.phase(Phase::kEndorsement)) << ','
        << Tick(r.phase(Phase::kOrdering)) << ','
        << Tick(r.phase(Phase::kValidation)) << ','
        << (r.commit_tick ? std::to_string(*r.commit_tick) : "") << ','
        << (r.commit_height ? std::to_string(*r.commit_height) : "") << ','
        << ReceiptStatus(r) << ','
        << (r.rejection_kind ? std::string(ErrorKindName(*r.rejection_kind))
                             : "")
        << '\n';
  }
}

void AppendErrors(std::ostringstream& out, const ModeRun& run) {
  const std::string mode(NoiseModeName(run.mode));
  for (const QueryResult& q : run.queries) {
    out << mode << ',' << q.index << ',' << q.tx_id << ','
        << CsvField(q.key.ToString()) << ',' << CsvField(q.requester_id) << ','
        << FormatDouble(q.epsilon_requested) << ','
        << FormatDouble(q.epsilon_charged) << ',' << (q.is_repeat ? 1 : 0)
        << ',' << (q.reused ? 1 : 0) << ',' << (q.committed ? 1 : 0) << ','
        << FormatDouble(q.exact) << ','
        << (q.noisy ? FormatDouble(*q.noisy) : "") << ','
        << (q.relative_error ? FormatDouble(*q.relative_error) : "") << '\n';
  }
}

void AppendThroughput(std::ostringstream& out, const ModeRun& run) {
  const std::string mode(NoiseModeName(run.mode));
  for (const TickSample& s : run.throughput) {
    out << mode << ',' << s.tick << ',' << s.committed << ','
        << FormatDouble(s.mean_latency) << '\n';
  }
}

ordered_json ModeSummary(const ModeRun& run) {
  const ChaincodeCounters& c = run.counters;
  return ordered_json{
      {"mode", std::string(NoiseModeName(run.mode))},
      {"epsilon_sum", run.epsilon_sum},
      {"mean_relative_error", run.mean_relative_error},
      {"accuracy", Accuracy(run.mean_relative_error)},
      {"error_samples", run.error_samples},
      {"submitted", run.flow.submitted},
      {"committed", run.flow.committed},
      {"rejected", run.flow.rejected},
      {"span_ticks", run.flow.span_ticks},
      {"throughput_tx_per_tick", run.flow.throughput},
      {"mean_latency_ticks", run.flow.mean_latency},
      {"max_latency_ticks", run.flow.max_latency},
      {"chain_height", run.chain.empty() ? 0 : run.chain.back().height},
      {"tip_hash", run.chain.empty() ? "" : ToHex(run.chain.back().block_hash)},
      {"replicas_consistent", run.replicas_consistent},
      {"counters",
       {{"queries", c.queries},
        {"cache_probes", c.cache_probes},
        {"exact_evaluations", c.exact_evaluations},
        {"records_scanned", c.records_scanned},
        {"fresh_answers", c.fresh_answers},
        {"reused_answers", c.reused_answers}}}};
}

absl::Status WriteLedger(const ModeRun& run, const ScenarioReport& report,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  EDH_RETURN_IF_ERROR(ExportLedgerJsonl(report.config.topology.channel_id,
                                        report.config.workload.epsilon_t,
                                        run.chain, out));
  return WriteFile(path, out.str());
}

}  // namespace

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string SummaryJson(const ScenarioReport& report) {
  std::size_t repeats = 0;
  for (const QueryResult& q : report.edh.queries) repeats += q.is_repeat ? 1 : 0;
  ordered_json j{
      {"scenario", report.config.name},
      {"seed", report.config.workload.seed},
      {"writes", report.config.workload.n_writes},
      {"queries", report.edh.queries.size()},
      {"repeats", repeats},
      {"epsilon_t", report.config.workload.epsilon_t},
      {"naive_epsilon_sum", report.naive.epsilon_sum},
      {"edh_epsilon_sum", report.edh.epsilon_sum},
      {"savings_percent", report.savings_percent},
      {"naive", ModeSummary(report.naive)},
      {"edh", ModeSummary(report.edh)},
      {"attacks", report.attacks.size()},
      {"config", ordered_json::parse(ScenarioConfigToJson(report.config))}};
  return j.dump(2) + "\n";
}

std::string SweepJson(std::span<const SweepPoint> points) {
  ordered_json arr = ordered_json::array();
  for (const SweepPoint& p : points) {
    arr.push_back(ordered_json{{"epsilon_t", p.epsilon_t},
                               {"mean_epsilon_f", p.mean_epsilon_f},
                               {"samples", p.samples},
                               {"mean_relative_error", p.mean_relative_error},
                               {"analytic_expectation", p.analytic_expectation},
                               {"standard_error", p.standard_error},
                               {"accuracy", p.accuracy}});
  }
  return arr.dump(2) + "\n";
}

absl::Status ExportReport(const ScenarioReport& report,
                          const std::filesystem::path& dir) {
  EDH_RETURN_IF_ERROR(EnsureDir(dir));

  std::ostringstream curve;
  curve << "query_index,naive_eps_sum,edh_eps_sum\n";
  const std::size_t n =
      std::min(report.naive.epsilon_curve.size(), report.edh.epsilon_curve.size());
  for (std::size_t i = 0; i < n; ++i) {
    curve << i << ',' << FormatDouble(report.naive.epsilon_curve[i]) << ','
          << FormatDouble(report.edh.epsilon_curve[i]) << '\n';
  }
  EDH_RETURN_IF_ERROR(WriteFile(dir / "budget_curve.csv", curve.str()));

  std::ostringstream errors;
  errors << "mode,query_index,tx_id,category,requester_id,epsilon_requested,"
            "epsilon_charged,repeat,reused,committed,exact,noisy,"
            "relative_error\n";
  AppendErrors(errors, report.naive);
  AppendErrors(errors, report.edh);
  EDH_RETURN_IF_ERROR(WriteFile(dir / "relative_errors.csv", errors.str()));

  std::ostringstream receipts;
  receipts << "mode,tx_id,type,client_id,submit_tick,proposal_tick,"
              "endorsement_tick,ordering_tick,validation_tick,commit_tick,"
              "commit_height,status,rejection_kind\n";
  AppendReceipts(receipts, report.naive);
  AppendReceipts(receipts, report.edh);
  EDH_RETURN_IF_ERROR(WriteFile(dir / "receipts.csv", receipts.str()));

  std::ostringstream throughput;
  throughput << "mode,tick,committed,mean_latency\n";
  AppendThroughput(throughput, report.naive);
  AppendThroughput(throughput, report.edh);
  EDH_RETURN_IF_ERROR(WriteFile(dir / "throughput.csv", throughput.str()));

  for (const ModeRun* run : {&report.naive, &report.edh}) {
    const std::string mode(NoiseModeName(run->mode));
    std::ostringstream spend;
    WriteSpendLogCsv(run->spend_log, spend);
    EDH_RETURN_IF_ERROR(
        WriteFile(dir / absl::StrCat("spend_log_", mode, ".csv"), spend.str()));
    EDH_RETURN_IF_ERROR(
        WriteLedger(*run, report, dir / absl::StrCat("ledger_", mode, ".jsonl")));
  }

  ordered_json attacks = ordered_json::array();
  for (const AttackOutcome& a : report.attacks) {
    attacks.push_back(ordered_json{
        {"mode", std::string(NoiseModeName(a.mode))},
        {"report", ordered_json::parse(AttackReportToJson(a.report))}});
  }
  EDH_RETURN_IF_ERROR(WriteFile(dir / "attacks.json", attacks.dump(2) + "\n"));
  return WriteFile(dir / "summary.json", SummaryJson(report));
}

absl::Status ExportSweep(std::span<const SweepPoint> points,
                         const std::filesystem::path& dir) {
  EDH_RETURN_IF_ERROR(EnsureDir(dir));
  std::ostringstream out;
  out << "epsilon_t,mean_epsilon_f,samples,mean_relative_error,"
         "analytic_expectation,standard_error,accuracy\n";
  for (const SweepPoint& p : points) {
    out << FormatDouble(p.epsilon_t) << ',' << FormatDouble(p.mean_epsilon_f)
        << ',' << p.samples << ',' << FormatDouble(p.mean_relative_error) << ','
        << FormatDouble(p.analytic_expectation) << ','
        << FormatDouble(p.standard_error) << ',' << FormatDouble(p.accuracy)
        << '\n';
  }
  EDH_RETURN_IF_ERROR(WriteFile(dir / "error_vs_epsilon.csv", out.str()));
  return WriteFile(dir / "sweep.json", SweepJson(points));
}

}  // namespace edh
