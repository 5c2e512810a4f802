#include "edh/adversary/attacks.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace edh {
namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

CategoryEstimate Summarize(const CategoryKey& key,
                           const std::vector<double>& values, Combine combine) {
  CategoryEstimate est;
  est.key = key;
  est.samples = values.size();
  // Shifted by the first value: identical samples average to that value.
  double shifted = 0.0;
  for (double v : values) shifted += v - values.front();
  const double mean =
      values.front() + shifted / static_cast<double>(values.size());
  est.estimate = combine == Combine::kMean ? mean : Median(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    est.sample_variance = ss / static_cast<double>(values.size() - 1);
  }
  est.distinct_values = std::set<double>(values.begin(), values.end()).size();
  return est;
}

double FreshEpsilon(std::span<const Observation> obs) {
  double total = 0.0;
  for (const Observation& o : obs) {
    if (!o.response.reused) total += o.response.epsilon_used;
  }
  return total;
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLinking:
      return "linking";
    case AttackKind::kComposition:
      return "composition";
    case AttackKind::kAveraging:
      return "averaging";
  }
  return "unknown";
}

absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(AsAbsl(name));
  if (lower == "linking") return AttackKind::kLinking;
  if (lower == "composition") return AttackKind::kComposition;
  if (lower == "averaging") return AttackKind::kAveraging;
  return MakeError(ErrorKind::kConfigInvalid,
                   absl::StrCat("unknown attack kind '", AsAbsl(name), "'"));
}

absl::StatusOr<BackgroundKnowledge> KnowledgeExcluding(
    std::span<const CommittedWrite> records, std::size_t index) {
  if (index >= records.size()) {
    return MakeError(ErrorKind::kInvalidArgument, "target index out of range");
  }
  BackgroundKnowledge bk;
  const WriteTransaction& t = records[index].tx;
  bk.target = {t.customer_name, t.product_name, t.color};
  bk.known_records.reserve(records.size() - 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i != index) bk.known_records.push_back(records[i].tx);
  }
  return bk;
}

void ScoreReport(AttackReport& report, double ground_truth) {
  report.ground_truth = ground_truth;
  report.absolute_error = std::abs(report.estimate - ground_truth);
  report.success = *report.absolute_error <= report.tolerance;
}

std::string AttackReportToJson(const AttackReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["attack"] = std::string(AttackKindName(report.kind));
  j["estimate"] = report.estimate;
  j["ground_truth"] = report.ground_truth ? ordered_json(*report.ground_truth)
                                          : ordered_json(nullptr);
  j["absolute_error"] = report.absolute_error
                            ? ordered_json(*report.absolute_error)
                            : ordered_json(nullptr);
  j["tolerance"] = report.tolerance;
  j["success"] = report.success;
  j["queries_consumed"] = report.queries_consumed;
  j["epsilon_observed"] = report.epsilon_observed;
  j["truncated"] = report.truncated;
  j["variance_reduction"] = report.variance_reduction;
  ordered_json cats = ordered_json::array();
  for (const CategoryEstimate& c : report.categories) {
    cats.push_back(ordered_json{{"category", c.key.ToString()},
                                {"samples", c.samples},
                                {"estimate", c.estimate},
                                {"sample_variance", c.sample_variance},
                                {"distinct_values", c.distinct_values}});
  }
  j["categories"] = std::move(cats);
  return j.dump(2);
}

absl::StatusOr<AttackReport> LinkingAttack(
    std::span<const Observation> responses, const BackgroundKnowledge& bk,
    double tolerance) {
  WriteTransaction probe;
  probe.customer_name = bk.target.customer_name;
  probe.product_name = bk.target.product_name;
  probe.color = bk.target.color;
  for (const Observation& o : responses) {
    if (o.query.aggregate != Aggregate::kSum) continue;
    if (!o.query.predicate.Matches(probe)) continue;
    double known = 0.0;
    for (const WriteTransaction& r : bk.known_records) {
      if (o.query.predicate.Matches(r)) known += static_cast<double>(r.quantity);
    }
    AttackReport report;
    report.kind = AttackKind::kLinking;
    report.tolerance = tolerance;
    report.estimate = o.response.value - known;
    report.queries_consumed = 1;
    report.epsilon_observed = o.response.reused ? 0.0 : o.response.epsilon_used;
    report.categories.push_back(CategoryEstimate{
        Categorize(o.query).value_or(CategoryKey{}), 1, report.estimate, 0.0,
        1});
    return report;
  }
  return MakeError(ErrorKind::kPredicateMismatch,
                   "no SUM response covers the target record");
}

absl::StatusOr<AttackReport> CompositionAttack(
    std::span<const Observation> answers_a,
    std::span<const Observation> answers_b, const CompositionOptions& options) {
  if (options.repeats == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "repeats must be >= 1");
  }
  using Pool = std::map<CategoryKey, std::vector<double>>;
  auto collect = [&](std::span<const Observation> obs) {
    Pool pool;
    for (const Observation& o : obs) {
      absl::StatusOr<CategoryKey> key = Categorize(o.query);
      if (!key.ok()) continue;
      std::vector<double>& v = pool[*key];
      if (v.size() < options.repeats) v.push_back(o.response.value);
    }
    return pool;
  };
  const Pool a = collect(answers_a);
  const Pool b = collect(answers_b);

  AttackReport report;
  report.kind = AttackKind::kComposition;
  report.tolerance = options.tolerance;
  for (const auto& [key, values_a] : a) {
    std::vector<double> values = values_a;
    if (!answers_b.empty()) {
      auto it = b.find(key);
      if (it == b.end()) continue;
      values.insert(values.end(), it->second.begin(), it->second.end());
    }
    report.queries_consumed += values.size();
    report.categories.push_back(Summarize(key, values, options.combine));
  }
  if (report.categories.empty()) {
    return MakeError(ErrorKind::kNoCommonQueries,
                     "the two peers answered no common category");
  }
  const CategoryEstimate* headline = &report.categories.front();
  if (options.target) {
    auto it = std::find_if(
        report.categories.begin(), report.categories.end(),
        [&](const CategoryEstimate& c) { return c.key == *options.target; });
    if (it == report.categories.end()) {
      return MakeError(ErrorKind::kNoCommonQueries,
                       "target category was not answered by both peers");
    }
    headline = &*it;
  }
  report.estimate = headline->estimate;
  // Averaging n independent responses divides the variance by n; identical
  // responses gain nothing.
  report.variance_reduction =
      headline->distinct_values > 1
          ? 1.0 / static_cast<double>(headline->samples)
          : 1.0;
  report.epsilon_observed = FreshEpsilon(answers_a) + FreshEpsilon(answers_b);
  return report;
}

absl::StatusOr<AttackReport> RepeatedQueryAveraging(
    const QueryTransaction& target, std::size_t n, const WorldState& data,
    const AveragingOptions& options) {
  if (n == 0) return MakeError(ErrorKind::kInvalidArgument, "n must be >= 1");
  WorldState state = data;
  EDH_ASSIGN_OR_RETURN(BudgetAccountant accountant,
                       BudgetAccountant::Create(options.epsilon_t));
  Chaincode chaincode({options.mode, options.max_contribution});
  NoiseStream rng(options.seed);

  AttackReport report;
  report.kind = AttackKind::kAveraging;
  report.tolerance = options.tolerance;
  std::vector<double> values;
  std::vector<Observation> seen;
  for (std::size_t i = 0; i < n; ++i) {
    absl::StatusOr<QueryAnswer> answer = chaincode.AnswerQuery(
        target, absl::StrCat("avg-", i), state, accountant, options.epsilon_f,
        rng);
    if (!answer.ok()) {
      if (IsError(answer.status(), ErrorKind::kExhausted) && !values.empty()) {
        report.truncated = true;
        break;
      }
      return answer.status();
    }
    values.push_back(answer->response.value);
    seen.push_back(Observation{target, answer->response});
  }
  EDH_ASSIGN_OR_RETURN(CategoryKey key, Categorize(target));
  report.categories.push_back(Summarize(key, values, Combine::kMean));
  const CategoryEstimate& est = report.categories.front();
  report.estimate = est.estimate;
  report.queries_consumed = values.size();
  report.epsilon_observed = FreshEpsilon(seen);
  report.variance_reduction =
      est.distinct_values > 1 ? 1.0 / static_cast<double>(est.samples) : 1.0;
  ScoreReport(report, EvaluateExact(target, data));
  return report;
}

}  // namespace edh
