#ifndef EDH_ADVERSARY_EXPERIMENTS_H_
#define EDH_ADVERSARY_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/adversary/attacks.h"
#include "edh/network/network.h"

namespace edh {

// Repeated single-response difference attacks on one target record.
struct LinkingTrialsResult {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double expected_rate = 0.0;  // 1 - exp(-tolerance / lambda); 1 without DP
  double lambda = 0.0;
  std::vector<double> errors;  // signed estimate - truth per trial
};

// epsilon == nullopt runs the exact chaincode (DP off).
absl::StatusOr<LinkingTrialsResult> RunLinkingTrials(
    const WorldState& data, std::size_t target_index,
    std::optional<double> epsilon, std::size_t trials, double tolerance,
    std::uint64_t seed, double max_contribution = 100.0);

// Monte Carlo of the naive baseline: per trial, two peers each return
// `repeats` fresh answers to q and the adversary averages all 2 * repeats.
struct CompositionVarianceResult {
  std::size_t trials = 0;
  std::size_t repeats = 0;
  double single_variance = 0.0;  // across trials, one response
  double mean_variance = 0.0;    // across trials, pooled mean
  double ratio = 0.0;            // mean_variance / single_variance
  double expected_ratio = 0.0;   // 1 / (2 * repeats)
};

absl::StatusOr<CompositionVarianceResult> RunCompositionVarianceTrials(
    const WorldState& data, const QueryTransaction& q, double epsilon,
    std::size_t repeats, std::size_t trials, std::uint64_t seed,
    double max_contribution = 100.0);

// Full-network composition attack: the adversary sends every query to each
// of the two channel peers, `repeats` times, and pools what it receives.
struct NetworkCompositionConfig {
  NoiseMode mode = NoiseMode::kEdh;
  double epsilon_t = 10.0;
  double epsilon_f = 1.0;
  std::size_t repeats = 50;
  std::uint64_t seed = 0;
  std::size_t writes_per_tick = 10;
};

struct NetworkCompositionResult {
  AttackReport report;
  std::size_t max_distinct_values = 0;  // over categories
  std::size_t answered = 0;
  std::size_t rejected = 0;
  bool chains_identical = false;
};

absl::StatusOr<NetworkCompositionResult> RunNetworkComposition(
    std::span<const WriteTransaction> writes,
    std::span<const QueryTransaction> queries,
    const NetworkCompositionConfig& config);

}  // namespace edh

#endif  // EDH_ADVERSARY_EXPERIMENTS_H_
