#include "edh/bench/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace edh {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

absl::Status Invalid(std::string_view msg) {
  return MakeError(ErrorKind::kConfigInvalid, msg);
}

absl::Status CheckKeys(const json& obj, std::string_view section,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    return Invalid(absl::StrCat("'", AsAbsl(section), "' must be an object"));
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return Invalid(absl::StrCat("unknown key '", key, "' in '",
                                  AsAbsl(section), "'"));
    }
  }
  return absl::OkStatus();
}

template <typename T>
void Read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

absl::StatusOr<EpsilonStrategy::Kind> ParseEpsilonKind(const std::string& s) {
  using Kind = EpsilonStrategy::Kind;
  if (s == "fixed") return Kind::kFixed;
  if (s == "equal_split") return Kind::kEqualSplit;
  if (s == "weighted") return Kind::kWeighted;
  if (s == "range") return Kind::kRange;
  if (s == "calibrated_range") return Kind::kCalibratedRange;
  return Invalid(absl::StrCat("unknown epsilon kind '", s, "'"));
}

std::string_view EpsilonKindName(EpsilonStrategy::Kind kind) {
  using Kind = EpsilonStrategy::Kind;
  switch (kind) {
    case Kind::kFixed:
      return "fixed";
    case Kind::kEqualSplit:
      return "equal_split";
    case Kind::kWeighted:
      return "weighted";
    case Kind::kRange:
      return "range";
    case Kind::kCalibratedRange:
      return "calibrated_range";
  }
  return "unknown";
}

absl::Status ParseInto(const json& root, ScenarioConfig& cfg) {
  EDH_RETURN_IF_ERROR(CheckKeys(root, "root",
                                {"name", "seed", "workload", "queries",
                                 "privacy", "network", "attacks", "sweep"}));
  WorkloadConfig& w = cfg.workload;
  Read(root, "name", cfg.name);
  Read(root, "seed", w.seed);

  if (root.contains("workload")) {
    const json& j = root.at("workload");
    EDH_RETURN_IF_ERROR(CheckKeys(j, "workload",
                                  {"n_writes", "customers", "products", "colors",
                                   "quantity_min", "quantity_max",
                                   "writes_per_tick"}));
    Read(j, "n_writes", w.n_writes);
    Read(j, "customers", w.customers);
    Read(j, "products", w.products);
    Read(j, "colors", w.colors);
    Read(j, "quantity_min", w.quantity_min);
    Read(j, "quantity_max", w.quantity_max);
    Read(j, "writes_per_tick", w.writes_per_tick);
  }
  if (root.contains("queries")) {
    const json& j = root.at("queries");
    EDH_RETURN_IF_ERROR(CheckKeys(j, "queries",
                                  {"n_queries", "repeat_ratio", "repeats",
                                   "aggregates", "requesters",
                                   "queries_per_tick"}));
    if (j.contains("repeat_ratio") && j.contains("repeats")) {
      return Invalid("give either repeat_ratio or repeats, not both");
    }
    Read(j, "n_queries", w.n_queries);
    Read(j, "repeat_ratio", w.repeat_ratio);
    if (j.contains("repeats")) w.repeats = j.at("repeats").get<std::size_t>();
    Read(j, "queries_per_tick", w.queries_per_tick);
    if (j.contains("aggregates")) {
      w.aggregates.clear();
      for (const json& a : j.at("aggregates")) {
        absl::StatusOr<Aggregate> agg = ParseAggregate(a.get<std::string>());
        if (!agg.ok()) return Invalid(std::string(agg.status().message()));
        w.aggregates.push_back(*agg);
      }
    }
    if (j.contains("requesters")) {
      for (const json& r : j.at("requesters")) {
        EDH_RETURN_IF_ERROR(
            CheckKeys(r, "requesters[]", {"id", "count", "weight"}));
        RequesterSpec spec;
        Read(r, "id", spec.requester_id);
        Read(r, "count", spec.count);
        Read(r, "weight", spec.weight);
        w.requesters.push_back(std::move(spec));
      }
    }
  }
  if (root.contains("privacy")) {
    const json& j = root.at("privacy");
    EDH_RETURN_IF_ERROR(
        CheckKeys(j, "privacy", {"epsilon_t", "max_contribution", "epsilon"}));
    Read(j, "epsilon_t", w.epsilon_t);
    Read(j, "max_contribution", cfg.max_contribution);
    if (j.contains("epsilon")) {
      const json& e = j.at("epsilon");
      EDH_RETURN_IF_ERROR(CheckKeys(e, "privacy.epsilon",
                                    {"kind", "value", "min", "max", "step",
                                     "fresh_total", "repeat_total"}));
      if (e.contains("kind")) {
        EDH_ASSIGN_OR_RETURN(w.epsilon.kind,
                             ParseEpsilonKind(e.at("kind").get<std::string>()));
      }
      Read(e, "value", w.epsilon.value);
      Read(e, "min", w.epsilon.min);
      Read(e, "max", w.epsilon.max);
      Read(e, "step", w.epsilon.step);
      Read(e, "fresh_total", w.epsilon.fresh_total);
      Read(e, "repeat_total", w.epsilon.repeat_total);
    }
  }
  if (root.contains("network")) {
    const json& j = root.at("network");
    EDH_RETURN_IF_ERROR(CheckKeys(j, "network",
                                  {"orgs", "peers_per_org", "channel",
                                   "endorsement_policy", "max_batch_size",
                                   "batch_timeout"}));
    TopologyConfig& t = cfg.topology;
    Read(j, "orgs", t.orgs);
    Read(j, "peers_per_org", t.peers_per_org);
    Read(j, "channel", t.channel_id);
    Read(j, "endorsement_policy", t.endorsement_policy);
    Read(j, "max_batch_size", t.orderer.max_batch_size);
    Read(j, "batch_timeout", t.orderer.batch_timeout);
  }
  if (root.contains("attacks")) {
    const json& j = root.at("attacks");
    EDH_RETURN_IF_ERROR(CheckKeys(j, "attacks",
                                  {"kinds", "tolerance", "epsilon", "repeats",
                                   "target_record"}));
    AttackConfig& a = cfg.attacks;
    if (j.contains("kinds")) {
      for (const json& k : j.at("kinds")) {
        EDH_ASSIGN_OR_RETURN(AttackKind kind,
                             ParseAttackKind(k.get<std::string>()));
        a.kinds.push_back(kind);
      }
    }
    Read(j, "tolerance", a.tolerance);
    Read(j, "epsilon", a.epsilon);
    Read(j, "repeats", a.repeats);
    Read(j, "target_record", a.target_record);
  }
  if (root.contains("sweep")) {
    const json& j = root.at("sweep");
    EDH_RETURN_IF_ERROR(CheckKeys(j, "sweep", {"epsilon_t"}));
    Read(j, "epsilon_t", cfg.sweep_epsilon_t);
  }
  return absl::OkStatus();
}

absl::Status Validate(const ScenarioConfig& cfg) {
  EDH_RETURN_IF_ERROR(ValidateWorkload(cfg.workload));
  const TopologyConfig& t = cfg.topology;
  const std::size_t peers = t.orgs * t.peers_per_org;
  if (peers == 0) return Invalid("topology has no peers");
  if (t.endorsement_policy < 1 || t.endorsement_policy > peers) {
    return Invalid("endorsement_policy must be in [1, peer count]");
  }
  if (t.orderer.max_batch_size == 0) return Invalid("max_batch_size must be >= 1");
  if (!(cfg.max_contribution > 0.0)) {
    return Invalid("max_contribution must be positive");
  }
  if (!(cfg.attacks.tolerance >= 0.0) || !(cfg.attacks.epsilon > 0.0) ||
      cfg.attacks.repeats == 0) {
    return Invalid("attack tolerance >= 0, epsilon > 0, repeats >= 1 required");
  }
  for (double e : cfg.sweep_epsilon_t) {
    if (!(e > 0.0)) return Invalid("sweep epsilon_t values must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ScenarioConfig> ParseScenarioConfig(std::string_view json_text) {
  ScenarioConfig cfg;
  try {
    const json root = json::parse(json_text);
    EDH_RETURN_IF_ERROR(ParseInto(root, cfg));
  } catch (const json::parse_error& e) {
    return MakeError(ErrorKind::kParseError, e.what());
  } catch (const json::exception& e) {
    return Invalid(e.what());
  }
  EDH_RETURN_IF_ERROR(Validate(cfg));
  return cfg;
}

absl::StatusOr<ScenarioConfig> LoadScenarioConfig(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIoFailure,
                     absl::StrCat("cannot read ", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenarioConfig(buf.str());
}

std::string ScenarioConfigToJson(const ScenarioConfig& cfg) {
  const WorkloadConfig& w = cfg.workload;
  ordered_json aggregates = ordered_json::array();
  for (Aggregate a : w.aggregates) aggregates.push_back(std::string(AggregateName(a)));
  ordered_json requesters = ordered_json::array();
  for (const RequesterSpec& r : w.requesters) {
    requesters.push_back(
        {{"id", r.requester_id}, {"count", r.count}, {"weight", r.weight}});
  }
  ordered_json queries{{"n_queries", w.n_queries}};
  if (w.repeats) {
    queries["repeats"] = *w.repeats;
  } else {
    queries["repeat_ratio"] = w.repeat_ratio;
  }
  queries["aggregates"] = aggregates;
  queries["requesters"] = requesters;
  queries["queries_per_tick"] = w.queries_per_tick;
  ordered_json kinds = ordered_json::array();
  for (AttackKind k : cfg.attacks.kinds) kinds.push_back(std::string(AttackKindName(k)));
  ordered_json j{
      {"name", cfg.name},
      {"seed", w.seed},
      {"workload",
       {{"n_writes", w.n_writes},
        {"customers", w.customers},
        {"products", w.products},
        {"colors", w.colors},
        {"quantity_min", w.quantity_min},
        {"quantity_max", w.quantity_max},
        {"writes_per_tick", w.writes_per_tick}}},
      {"queries", queries},
      {"privacy",
       {{"epsilon_t", w.epsilon_t},
        {"max_contribution", cfg.max_contribution},
        {"epsilon",
         {{"kind", std::string(EpsilonKindName(w.epsilon.kind))},
          {"value", w.epsilon.value},
          {"min", w.epsilon.min},
          {"max", w.epsilon.max},
          {"step", w.epsilon.step},
          {"fresh_total", w.epsilon.fresh_total},
          {"repeat_total", w.epsilon.repeat_total}}}}},
      {"network",
       {{"orgs", cfg.topology.orgs},
        {"peers_per_org", cfg.topology.peers_per_org},
        {"channel", cfg.topology.channel_id},
        {"endorsement_policy", cfg.topology.endorsement_policy},
        {"max_batch_size", cfg.topology.orderer.max_batch_size},
        {"batch_timeout", cfg.topology.orderer.batch_timeout}}},
      {"attacks",
       {{"kinds", kinds},
        {"tolerance", cfg.attacks.tolerance},
        {"epsilon", cfg.attacks.epsilon},
        {"repeats", cfg.attacks.repeats},
        {"target_record", cfg.attacks.target_record}}},
      {"sweep", {{"epsilon_t", cfg.sweep_epsilon_t}}}};
  return j.dump(2);
}

NetworkConfig MakeNetworkConfig(const ScenarioConfig& cfg, NoiseMode mode,
                                std::vector<std::string> clients) {
  const TopologyConfig& t = cfg.topology;
  NetworkConfig net;
  ChannelSpec channel;
  channel.channel_id = t.channel_id;
  channel.endorsement_policy = t.endorsement_policy;
  channel.epsilon_t = cfg.workload.epsilon_t;
  channel.clients = std::move(clients);
  for (std::size_t o = 1; o <= t.orgs; ++o) {
    for (std::size_t p = 0; p < t.peers_per_org; ++p) {
      const std::string org = absl::StrCat("org", o);
      const std::string id = absl::StrCat("peer", p, ".", org);
      net.peers.push_back({id, org});
      channel.members.push_back(id);
    }
  }
  net.channels.push_back(std::move(channel));
  net.orderer = t.orderer;
  net.chaincode = {mode, cfg.max_contribution};
  net.seed = cfg.workload.seed;
  return net;
}

}  // namespace edh
