#ifndef EDH_BENCH_CONFIG_H_
#define EDH_BENCH_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/adversary/attacks.h"
#include "edh/bench/workload.h"
#include "edh/network/network.h"

namespace edh {

struct TopologyConfig {
  std::size_t orgs = 2;
  std::size_t peers_per_org = 1;
  std::string channel_id = "mychannel";
  std::size_t endorsement_policy = 1;
  OrdererConfig orderer;
};

struct AttackConfig {
  std::vector<AttackKind> kinds;
  double tolerance = kDefaultAttackTolerance;
  double epsilon = 1.0;
  std::size_t repeats = 50;
  std::size_t target_record = 0;
};

struct ScenarioConfig {
  std::string name = "default";
  WorkloadConfig workload;
  TopologyConfig topology;
  AttackConfig attacks;
  std::vector<double> sweep_epsilon_t;
  double max_contribution = 100.0;
};

// JSON schema (all sections and keys optional, unknown keys rejected):
// {
//   "name": str, "seed": uint,
//   "workload": {"n_writes", "customers", "products", "colors",
//                "quantity_min", "quantity_max", "writes_per_tick"},
//   "queries": {"n_queries", "repeat_ratio" | "repeats", "aggregates",
//               "requesters": [{"id", "count", "weight"}], "queries_per_tick"},
//   "privacy": {"epsilon_t", "max_contribution",
//               "epsilon": {"kind": "fixed"|"equal_split"|"weighted"|"range"|
//                                   "calibrated_range",
//                           "value", "min", "max", "step",
//                           "fresh_total", "repeat_total"}},
//   "network": {"orgs", "peers_per_org", "channel", "endorsement_policy",
//               "max_batch_size", "batch_timeout"},
//   "attacks": {"kinds": [...], "tolerance", "epsilon", "repeats",
//               "target_record"},
//   "sweep": {"epsilon_t": [...]}
// }
absl::StatusOr<ScenarioConfig> ParseScenarioConfig(std::string_view json_text);
absl::StatusOr<ScenarioConfig> LoadScenarioConfig(
    const std::filesystem::path& path);

// Canonical JSON of the effective configuration.
std::string ScenarioConfigToJson(const ScenarioConfig& config);

NetworkConfig MakeNetworkConfig(const ScenarioConfig& config, NoiseMode mode,
                                std::vector<std::string> clients);

}  // namespace edh

#endif  // EDH_BENCH_CONFIG_H_
