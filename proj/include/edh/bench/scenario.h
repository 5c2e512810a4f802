#ifndef EDH_BENCH_SCENARIO_H_
#define EDH_BENCH_SCENARIO_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/adversary/attacks.h"
#include "edh/bench/config.h"
#include "edh/bench/metrics.h"
#include "edh/bench/workload.h"

namespace edh {

struct QueryResult {
  std::size_t index = 0;
  std::string tx_id;
  CategoryKey key;
  std::string requester_id;
  double epsilon_requested = 0.0;
  bool is_repeat = false;
  bool committed = false;
  bool reused = false;
  double epsilon_charged = 0.0;
  double exact = 0.0;
  std::optional<double> noisy;
  std::optional<double> relative_error;  // absent when exact == 0
  std::string rejection;
};

struct ModeRun {
  NoiseMode mode = NoiseMode::kEdh;
  std::vector<TransactionReceipt> receipts;
  std::vector<QueryResult> queries;
  std::vector<double> epsilon_curve;  // cumulative charge after each query
  double epsilon_sum = 0.0;
  double mean_relative_error = 0.0;
  std::size_t error_samples = 0;
  FlowStats flow;
  std::vector<TickSample> throughput;
  std::vector<SpendEntry> spend_log;
  std::vector<Block> chain;
  WorldState world;
  bool replicas_consistent = false;
  ChaincodeCounters counters;  // summed over peers
};

struct AttackOutcome {
  NoiseMode mode = NoiseMode::kEdh;
  AttackReport report;
};

struct ScenarioReport {
  ScenarioConfig config;
  ModeRun naive;
  ModeRun edh;
  double savings_percent = 0.0;
  std::vector<AttackOutcome> attacks;
};

// Drives the whole workload through a fresh network in one noise mode.
absl::StatusOr<ModeRun> RunMode(const ScenarioConfig& config,
                                const Workload& workload, NoiseMode mode);

// Naive and EDH runs on the same schedule and seeds, plus configured attacks.
absl::StatusOr<ScenarioReport> RunScenario(const ScenarioConfig& config);

absl::StatusOr<AttackReport> RunAttack(const ScenarioConfig& config,
                                       const Workload& workload,
                                       const WorldState& data, AttackKind kind,
                                       NoiseMode mode);

struct SweepPoint {
  double epsilon_t = 0.0;
  double mean_epsilon_f = 0.0;
  std::size_t samples = 0;
  double mean_relative_error = 0.0;
  double analytic_expectation = 0.0;
  double standard_error = 0.0;
  double accuracy = 0.0;
};

// One EDH run per epsilon_t with everything else (including seeds) fixed.
absl::StatusOr<std::vector<SweepPoint>> RunErrorSweep(
    const ScenarioConfig& config, std::span<const double> epsilon_t_values);

}  // namespace edh

#endif  // EDH_BENCH_SCENARIO_H_
