#ifndef EDH_ADVERSARY_ATTACKS_H_
#define EDH_ADVERSARY_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/chaincode/engine.h"
#include "edh/ledger/world_state.h"

namespace edh {

enum class AttackKind { kLinking, kComposition, kAveraging };
std::string_view AttackKindName(AttackKind kind);
absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name);

inline constexpr double kDefaultAttackTolerance = 5.0;

struct TargetDescriptor {
  std::string customer_name;
  std::string product_name;
  std::string color;
};

// Everything on the ledger except the target record.
struct BackgroundKnowledge {
  std::vector<WriteTransaction> known_records;
  TargetDescriptor target;
};

// Builds the strongest adversary's knowledge: all records but records[index].
absl::StatusOr<BackgroundKnowledge> KnowledgeExcluding(
    std::span<const CommittedWrite> records, std::size_t index);

// A response the adversary received, with the query that produced it.
struct Observation {
  QueryTransaction query;
  PerturbedResponse response;
};

struct CategoryEstimate {
  CategoryKey key;
  std::size_t samples = 0;
  double estimate = 0.0;
  double sample_variance = 0.0;  // unbiased; 0 for a single sample
  std::size_t distinct_values = 0;
};

struct AttackReport {
  AttackKind kind = AttackKind::kLinking;
  double estimate = 0.0;
  std::optional<double> ground_truth;
  std::optional<double> absolute_error;
  double tolerance = kDefaultAttackTolerance;
  bool success = false;  // absolute_error <= tolerance
  std::size_t queries_consumed = 0;
  double epsilon_observed = 0.0;  // sum of distinct fresh epsilons seen
  bool truncated = false;         // averaging stopped by Exhausted
  double variance_reduction = 1.0;
  std::vector<CategoryEstimate> categories;
};

// Sets ground_truth, absolute_error and success.
void ScoreReport(AttackReport& report, double ground_truth);

std::string AttackReportToJson(const AttackReport& report);

// Difference attack: first SUM response whose predicate covers the target,
// minus the known matching quantities.
absl::StatusOr<AttackReport> LinkingAttack(
    std::span<const Observation> responses, const BackgroundKnowledge& bk,
    double tolerance = kDefaultAttackTolerance);

enum class Combine { kMean, kMedian };

struct CompositionOptions {
  std::size_t repeats = 1;  // responses used per peer per category
  Combine combine = Combine::kMean;
  double tolerance = kDefaultAttackTolerance;
  std::optional<CategoryKey> target;  // headline category; first common key
};

// Pools responses from two peers per category (categories answered by both;
// all of answers_a when answers_b is empty) and combines them.
absl::StatusOr<AttackReport> CompositionAttack(
    std::span<const Observation> answers_a,
    std::span<const Observation> answers_b, const CompositionOptions& options);

struct AveragingOptions {
  double epsilon_t = 1.0;
  double epsilon_f = 1.0;
  NoiseMode mode = NoiseMode::kNaive;
  double max_contribution = 100.0;
  std::uint64_t seed = 0;
  double tolerance = kDefaultAttackTolerance;
};

// Issues the target query n times against a private copy of data and
// averages the answers. Stops early at Exhausted; fails only when no answer
// was obtained.
absl::StatusOr<AttackReport> RepeatedQueryAveraging(
    const QueryTransaction& target, std::size_t n, const WorldState& data,
    const AveragingOptions& options);

}  // namespace edh

#endif  // EDH_ADVERSARY_ATTACKS_H_
