#include "edh/adversary/experiments.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace edh {
namespace {

double Variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

constexpr std::string_view kAdversary = "competitor";

ContractInvocation StatisticsInvocation() {
  return {"edh-cc", "1.0", "queryStatistics", std::chrono::milliseconds(30000)};
}

}  // namespace

absl::StatusOr<LinkingTrialsResult> RunLinkingTrials(
    const WorldState& data, std::size_t target_index,
    std::optional<double> epsilon, std::size_t trials, double tolerance,
    std::uint64_t seed, double max_contribution) {
  EDH_ASSIGN_OR_RETURN(BackgroundKnowledge bk,
                       KnowledgeExcluding(data.records(), target_index));
  const double truth =
      static_cast<double>(data.records()[target_index].tx.quantity);
  QueryTransaction q;
  q.invocation = StatisticsInvocation();
  q.aggregate = Aggregate::kSum;
  q.requester_id = std::string(kAdversary);
  q.predicate = {bk.target.customer_name, bk.target.product_name,
                 bk.target.color};

  const NoiseMode mode = epsilon ? NoiseMode::kNaive : NoiseMode::kExact;
  const double eps = epsilon.value_or(1.0);
  Chaincode chaincode({mode, max_contribution});
  NoiseStream rng(seed);
  WorldState state = data;

  LinkingTrialsResult result;
  result.trials = trials;
  result.lambda = epsilon ? max_contribution / eps : 0.0;
  result.expected_rate =
      epsilon ? 1.0 - std::exp(-tolerance / result.lambda) : 1.0;
  result.errors.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    EDH_ASSIGN_OR_RETURN(BudgetAccountant accountant,
                         BudgetAccountant::Create(eps));
    EDH_ASSIGN_OR_RETURN(
        QueryAnswer answer,
        chaincode.AnswerQuery(q, absl::StrCat("link-", t), state, accountant,
                              eps, rng));
    const Observation obs{q, answer.response};
    EDH_ASSIGN_OR_RETURN(AttackReport report,
                         LinkingAttack(std::span(&obs, 1), bk, tolerance));
    ScoreReport(report, truth);
    result.errors.push_back(report.estimate - truth);
    if (report.success) ++result.successes;
  }
  result.success_rate =
      trials == 0 ? 0.0
                  : static_cast<double>(result.successes) /
                        static_cast<double>(trials);
  return result;
}

absl::StatusOr<CompositionVarianceResult> RunCompositionVarianceTrials(
    const WorldState& data, const QueryTransaction& q, double epsilon,
    std::size_t repeats, std::size_t trials, std::uint64_t seed,
    double max_contribution) {
  if (repeats == 0 || trials < 2) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "need repeats >= 1 and trials >= 2");
  }
  Chaincode peer_a({NoiseMode::kNaive, max_contribution});
  Chaincode peer_b({NoiseMode::kNaive, max_contribution});
  NoiseStream rng_a(DeriveSeed(seed, "peer-a"));
  NoiseStream rng_b(DeriveSeed(seed, "peer-b"));
  const double budget = epsilon * static_cast<double>(repeats);

  std::vector<double> singles;
  std::vector<double> means;
  singles.reserve(trials);
  means.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    WorldState state_a = data;
    WorldState state_b = data;
    EDH_ASSIGN_OR_RETURN(BudgetAccountant acct_a,
                         BudgetAccountant::Create(budget));
    EDH_ASSIGN_OR_RETURN(BudgetAccountant acct_b,
                         BudgetAccountant::Create(budget));
    double sum = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      EDH_ASSIGN_OR_RETURN(
          QueryAnswer a,
          peer_a.AnswerQuery(q, absl::StrCat("a-", r), state_a, acct_a,
                             epsilon, rng_a));
      EDH_ASSIGN_OR_RETURN(
          QueryAnswer b,
          peer_b.AnswerQuery(q, absl::StrCat("b-", r), state_b, acct_b,
                             epsilon, rng_b));
      if (r == 0) singles.push_back(a.response.value);
      sum += a.response.value + b.response.value;
    }
    means.push_back(sum / static_cast<double>(2 * repeats));
  }
  CompositionVarianceResult result;
  result.trials = trials;
  result.repeats = repeats;
  result.single_variance = Variance(singles);
  result.mean_variance = Variance(means);
  result.ratio = result.mean_variance / result.single_variance;
  result.expected_ratio = 1.0 / static_cast<double>(2 * repeats);
  return result;
}

absl::StatusOr<NetworkCompositionResult> RunNetworkComposition(
    std::span<const WriteTransaction> writes,
    std::span<const QueryTransaction> queries,
    const NetworkCompositionConfig& config) {
  NetworkConfig net_config = DefaultNetworkConfig(
      config.epsilon_t, {"retailer", std::string(kAdversary)});
  net_config.chaincode.mode = config.mode;
  net_config.seed = config.seed;
  EDH_ASSIGN_OR_RETURN(Network net, Network::Create(std::move(net_config)));
  const ChannelSpec& channel = *net.channel("mychannel");
  const std::string peer_a = channel.members.at(0);
  const std::string peer_b = channel.members.at(1);

  const std::size_t per_tick = std::max<std::size_t>(config.writes_per_tick, 1);
  for (std::size_t i = 0; i < writes.size(); ++i) {
    net.Schedule(i / per_tick,
                 Proposal{"", "mychannel", "retailer", writes[i], 0.0});
  }
  net.Run();

  std::vector<std::string> ids_a;
  std::vector<std::string> ids_b;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const std::uint64_t tick = net.now();
    for (const QueryTransaction& q : queries) {
      QueryTransaction adv = q;
      adv.requester_id = std::string(kAdversary);
      ids_a.push_back(net.Schedule(
          tick, Proposal{"", "mychannel", std::string(kAdversary), adv,
                         config.epsilon_f},
          {peer_a}));
      ids_b.push_back(net.Schedule(
          tick, Proposal{"", "mychannel", std::string(kAdversary), adv,
                         config.epsilon_f},
          {peer_b}));
    }
    net.Run();
  }

  NetworkCompositionResult result;
  auto observations = [&](const std::vector<std::string>& ids) {
    std::vector<Observation> obs;
    for (const std::string& id : ids) {
      const TransactionReceipt* r = net.receipt(id);
      if (r == nullptr || !r->query_record) {
        ++result.rejected;
        continue;
      }
      ++result.answered;
      QueryTransaction q;
      q.predicate = PredicateOf(r->query_record->key);
      q.aggregate = r->query_record->key.aggregate;
      q.requester_id = std::string(kAdversary);
      obs.push_back(Observation{q, r->query_record->response});
    }
    return obs;
  };
  const std::vector<Observation> obs_a = observations(ids_a);
  const std::vector<Observation> obs_b = observations(ids_b);
  CompositionOptions options;
  options.repeats = config.repeats;
  EDH_ASSIGN_OR_RETURN(result.report, CompositionAttack(obs_a, obs_b, options));
  for (const CategoryEstimate& c : result.report.categories) {
    result.max_distinct_values =
        std::max(result.max_distinct_values, c.distinct_values);
  }
  const ChannelLedger* la = net.peer(peer_a)->ledger("mychannel");
  const ChannelLedger* lb = net.peer(peer_b)->ledger("mychannel");
  result.chains_identical = la->tip().block_hash == lb->tip().block_hash &&
                            la->height() == lb->height();
  return result;
}

}  // namespace edh
