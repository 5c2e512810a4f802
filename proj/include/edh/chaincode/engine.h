#ifndef EDH_CHAINCODE_ENGINE_H_
#define EDH_CHAINCODE_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "edh/budget/accountant.h"
#include "edh/chaincode/query_record.h"
#include "edh/common/status.h"
#include "edh/dp/laplace.h"
#include "edh/ledger/world_state.h"

namespace edh {

// kExact is the stock chaincode (true answers, nothing tracked). kNaive
// perturbs every query with fresh noise. kEdh first serves repeated queries
// from the query log and only perturbs (and spends) for new categories.
enum class NoiseMode { kExact, kNaive, kEdh };

std::string_view NoiseModeName(NoiseMode mode);
absl::StatusOr<NoiseMode> ParseNoiseMode(std::string_view name);

// Most recent logged record with an exactly equal key.
std::optional<QueryRecord> LookupCached(const WorldState& state,
                                        const CategoryKey& key);

// COUNT of matching records, or SUM of their quantities; 0 when none match.
double EvaluateExact(const QueryTransaction& q, const WorldState& state);

// Seed for the fresh-noise stream of a category evaluated at a snapshot
// height. Every endorser of the channel derives the same seed, so they
// produce the same answer for the same key on the same data.
std::uint64_t DeriveNoiseSeed(std::uint64_t channel_seed, const CategoryKey& key,
                              std::uint64_t snapshot_height);

struct ChaincodeOptions {
  NoiseMode mode = NoiseMode::kEdh;
  double max_contribution = 100.0;
};

// Instrumentation for the linear-cost claim: one probe per query in kEdh mode,
// one evaluation per fresh answer.
struct ChaincodeCounters {
  std::uint64_t queries = 0;
  std::uint64_t cache_probes = 0;
  std::uint64_t exact_evaluations = 0;
  std::uint64_t records_scanned = 0;
  std::uint64_t fresh_answers = 0;
  std::uint64_t reused_answers = 0;
};

struct QueryAnswer {
  PerturbedResponse response;
  QueryRecord record;
  double epsilon_rem = 0.0;
};

class Chaincode {
 public:
  explicit Chaincode(ChaincodeOptions options = {}) : options_(options) {}

  // Reuse path: a cached record for the key is returned verbatim (reused =
  // true), logged to the query log and the spend log, and no budget moves.
  // Fresh path: spend epsilon_f, evaluate exactly, add Laplace noise, record.
  // Exhausted leaves state and accountant untouched.
  template <UniformSource Rng>
  absl::StatusOr<QueryAnswer> AnswerQuery(const QueryTransaction& q,
                                          std::string_view query_id,
                                          WorldState& state,
                                          BudgetAccountant& accountant,
                                          double epsilon_f, Rng& rng,
                                          std::uint64_t height = 0);

  const ChaincodeOptions& options() const { return options_; }
  const ChaincodeCounters& counters() const { return counters_; }
  void ResetCounters() { counters_ = {}; }

 private:
  absl::StatusOr<CategoryKey> Prepare(const QueryTransaction& q);
  std::optional<QueryAnswer> TryReuse(const QueryTransaction& q,
                                      const CategoryKey& key,
                                      std::string_view query_id,
                                      WorldState& state,
                                      BudgetAccountant& accountant,
                                      std::uint64_t height);
  double Evaluate(const QueryTransaction& q, const WorldState& state);

  ChaincodeOptions options_;
  ChaincodeCounters counters_;
};

template <UniformSource Rng>
absl::StatusOr<QueryAnswer> Chaincode::AnswerQuery(
    const QueryTransaction& q, std::string_view query_id, WorldState& state,
    BudgetAccountant& accountant, double epsilon_f, Rng& rng,
    std::uint64_t height) {
  EDH_ASSIGN_OR_RETURN(CategoryKey key, Prepare(q));

  if (options_.mode == NoiseMode::kExact) {
    QueryAnswer answer;
    answer.response = PerturbedResponse{Evaluate(q, state), 0.0, false,
                                        std::string(query_id)};
    answer.record = QueryRecord{key, 0.0, answer.response, height};
    answer.epsilon_rem = accountant.epsilon_rem();
    return answer;
  }

  if (options_.mode == NoiseMode::kEdh) {
    if (auto reused = TryReuse(q, key, query_id, state, accountant, height)) {
      return *std::move(reused);
    }
  }

  const SensitivitySpec spec{q.aggregate, options_.max_contribution};
  // Validate epsilon before touching the accountant.
  EDH_ASSIGN_OR_RETURN(double delta_f, Sensitivity(spec));
  EDH_RETURN_IF_ERROR(LaplaceScale(epsilon_f, delta_f).status());
  EDH_RETURN_IF_ERROR(accountant.TrySpend(epsilon_f, query_id, q.requester_id));

  const double exact = Evaluate(q, state);
  EDH_ASSIGN_OR_RETURN(double noisy, Perturb(exact, epsilon_f, spec, rng));
  ++counters_.fresh_answers;

  QueryAnswer answer;
  answer.response =
      PerturbedResponse{noisy, epsilon_f, false, std::string(query_id)};
  answer.record = QueryRecord{key, epsilon_f, answer.response, height};
  answer.epsilon_rem = accountant.epsilon_rem();
  state.RecordQuery(answer.record, answer.epsilon_rem);
  return answer;
}

}  // namespace edh

#endif  // EDH_CHAINCODE_ENGINE_H_
