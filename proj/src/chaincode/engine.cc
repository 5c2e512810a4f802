#include "edh/chaincode/engine.h"

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "edh/common/digest.h"
#include "edh/common/encoding.h"

namespace edh {

std::string_view NoiseModeName(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kExact:
      return "exact";
    case NoiseMode::kNaive:
      return "naive";
    case NoiseMode::kEdh:
      return "edh";
  }
  return "unknown";
}

absl::StatusOr<NoiseMode> ParseNoiseMode(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(AsAbsl(name));
  if (lower == "exact") return NoiseMode::kExact;
  if (lower == "naive") return NoiseMode::kNaive;
  if (lower == "edh") return NoiseMode::kEdh;
  return MakeError(ErrorKind::kConfigInvalid,
                   absl::StrCat("unknown noise mode '", AsAbsl(name), "'"));
}

std::optional<QueryRecord> LookupCached(const WorldState& state,
                                        const CategoryKey& key) {
  const QueryRecord* rec = state.FindLatest(key);
  if (rec == nullptr) return std::nullopt;
  return *rec;
}

double EvaluateExact(const QueryTransaction& q, const WorldState& state) {
  double total = 0.0;
  for (const CommittedWrite& r : state.records()) {
    if (!q.predicate.Matches(r.tx)) continue;
    total += q.aggregate == Aggregate::kCount
                 ? 1.0
                 : static_cast<double>(r.tx.quantity);
  }
  return total;
}

std::uint64_t DeriveNoiseSeed(std::uint64_t channel_seed, const CategoryKey& key,
                              std::uint64_t snapshot_height) {
  CanonicalWriter w;
  w.PutString("edh-noise-seed");
  w.PutU64(channel_seed);
  Encode(key, w);
  w.PutU64(snapshot_height);
  const Digest d = Sha256(w.bytes());
  std::uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed |= std::uint64_t{d[i]} << (8 * i);
  return seed;
}

absl::StatusOr<CategoryKey> Chaincode::Prepare(const QueryTransaction& q) {
  EDH_RETURN_IF_ERROR(ValidateQuery(q));
  ++counters_.queries;
  return Categorize(q);
}

std::optional<QueryAnswer> Chaincode::TryReuse(const QueryTransaction& q,
                                               const CategoryKey& key,
                                               std::string_view query_id,
                                               WorldState& state,
                                               BudgetAccountant& accountant,
                                               std::uint64_t height) {
  ++counters_.cache_probes;
  const QueryRecord* cached = state.FindLatest(key);
  if (cached == nullptr) return std::nullopt;
  ++counters_.reused_answers;

  QueryAnswer answer;
  answer.response = PerturbedResponse{cached->response.value,
                                      cached->response.epsilon_used, true,
                                      std::string(query_id)};
  answer.record =
      QueryRecord{key, cached->epsilon_spent, answer.response, height};
  accountant.LogReuse(query_id, q.requester_id);
  answer.epsilon_rem = accountant.epsilon_rem();
  state.RecordQuery(answer.record, answer.epsilon_rem);
  return answer;
}

double Chaincode::Evaluate(const QueryTransaction& q, const WorldState& state) {
  ++counters_.exact_evaluations;
  counters_.records_scanned += state.records().size();
  return EvaluateExact(q, state);
}

}  // namespace edh
