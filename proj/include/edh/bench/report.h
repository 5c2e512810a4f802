#ifndef EDH_BENCH_REPORT_H_
#define EDH_BENCH_REPORT_H_

#include <filesystem>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "edh/bench/scenario.h"

namespace edh {

// Writes into dir (created if missing):
//   budget_curve.csv     query_index,naive_eps_sum,edh_eps_sum
//   relative_errors.csv  per query and mode
//   receipts.csv         per transaction and mode, phase ticks
//   throughput.csv       mode,tick,committed,mean_latency
//   spend_log_naive.csv, spend_log_edh.csv
//   ledger_edh.jsonl, ledger_naive.jsonl
//   attacks.json, summary.json
// Output is a pure function of the report: LF line endings, '.' decimals.
absl::Status ExportReport(const ScenarioReport& report,
                          const std::filesystem::path& dir);

// error_vs_epsilon.csv, one row per epsilon_t.
absl::Status ExportSweep(std::span<const SweepPoint> points,
                         const std::filesystem::path& dir);

std::string SummaryJson(const ScenarioReport& report);
std::string SweepJson(std::span<const SweepPoint> points);

// Quotes a CSV field when it holds a comma, quote, or newline.
std::string CsvField(std::string_view value);

}  // namespace edh

#endif  // EDH_BENCH_REPORT_H_
