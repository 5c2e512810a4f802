#include "edh/ledger/ledger_io.h"

#include <string>

#include "absl/strings/str_cat.h"
#include "edh/common/status.h"
#include "json.hpp"

namespace edh {
namespace {

using nlohmann::json;

json OptionalToJson(const std::optional<std::string>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

std::optional<std::string> OptionalFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

void InvocationToJson(const ContractInvocation& c, json& j) {
  j["contract_id"] = c.contract_id;
  j["contract_version"] = c.contract_version;
  j["contract_function"] = c.contract_function;
  j["timeout_ms"] = c.timeout.count();
}

ContractInvocation InvocationFromJson(const json& j) {
  return ContractInvocation{
      j.at("contract_id").get<std::string>(),
      j.at("contract_version").get<std::string>(),
      j.at("contract_function").get<std::string>(),
      std::chrono::milliseconds(j.at("timeout_ms").get<std::int64_t>())};
}

json KeyToJson(const CategoryKey& k) {
  return json{{"aggregate", std::string(AggregateName(k.aggregate))},
              {"customer_name", OptionalToJson(k.customer_name)},
              {"product_name", OptionalToJson(k.product_name)},
              {"color", OptionalToJson(k.color)}};
}

json TxToJson(const LedgerTransaction& tx, std::uint64_t height,
              std::size_t index) {
  json j;
  j["kind"] = "tx";
  j["height"] = height;
  j["index"] = index;
  j["tx_id"] = tx.tx_id;
  json endorsements = json::array();
  for (const Endorsement& e : tx.endorsements) {
    endorsements.push_back(
        json{{"peer_id", e.peer_id}, {"signature", ToHex(e.signature)}});
  }
  j["endorsements"] = std::move(endorsements);
  if (const auto* w = std::get_if<WriteTransaction>(&tx.payload)) {
    j["type"] = "write";
    json body;
    InvocationToJson(w->invocation, body);
    body["product_name"] = w->product_name;
    body["color"] = w->color;
    body["quantity"] = w->quantity;
    body["customer_name"] = w->customer_name;
    j["write"] = std::move(body);
  } else {
    const QueryOutcome& o = std::get<QueryOutcome>(tx.payload);
    j["type"] = "query";
    json body;
    InvocationToJson(o.query.invocation, body);
    body["read_only"] = o.query.read_only;
    body["predicate"] = {
        {"customer_name", OptionalToJson(o.query.predicate.customer_name)},
        {"product_name", OptionalToJson(o.query.predicate.product_name)},
        {"color", OptionalToJson(o.query.predicate.color)}};
    body["aggregate"] = std::string(AggregateName(o.query.aggregate));
    body["requester_id"] = o.query.requester_id;
    const QueryRecord& r = o.record;
    body["record"] = {{"key", KeyToJson(r.key)},
                      {"epsilon_spent", r.epsilon_spent},
                      {"response",
                       {{"value", r.response.value},
                        {"epsilon_used", r.response.epsilon_used},
                        {"reused", r.response.reused},
                        {"query_id", r.response.query_id}}},
                      {"recorded_at", r.recorded_at}};
    body["epsilon_rem"] = o.epsilon_rem;
    j["query"] = std::move(body);
  }
  return j;
}

absl::StatusOr<Aggregate> AggregateFromJson(const json& j) {
  return ParseAggregate(j.get<std::string>());
}

absl::StatusOr<LedgerTransaction> TxFromJson(const json& j) {
  LedgerTransaction tx;
  tx.tx_id = j.at("tx_id").get<std::string>();
  for (const json& e : j.at("endorsements")) {
    std::optional<Digest> sig = DigestFromHex(e.at("signature").get<std::string>());
    if (!sig) return MakeError(ErrorKind::kParseError, "bad signature hex");
    tx.endorsements.push_back(
        Endorsement{e.at("peer_id").get<std::string>(), *sig});
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "write") {
    const json& b = j.at("write");
    WriteTransaction w;
    w.invocation = InvocationFromJson(b);
    w.product_name = b.at("product_name").get<std::string>();
    w.color = b.at("color").get<std::string>();
    w.quantity = b.at("quantity").get<std::int64_t>();
    w.customer_name = b.at("customer_name").get<std::string>();
    tx.payload = std::move(w);
  } else if (type == "query") {
    const json& b = j.at("query");
    QueryOutcome o;
    o.query.invocation = InvocationFromJson(b);
    o.query.read_only = b.at("read_only").get<bool>();
    const json& p = b.at("predicate");
    o.query.predicate.customer_name = OptionalFromJson(p.at("customer_name"));
    o.query.predicate.product_name = OptionalFromJson(p.at("product_name"));
    o.query.predicate.color = OptionalFromJson(p.at("color"));
    EDH_ASSIGN_OR_RETURN(o.query.aggregate, AggregateFromJson(b.at("aggregate")));
    o.query.requester_id = b.at("requester_id").get<std::string>();
    const json& r = b.at("record");
    const json& k = r.at("key");
    EDH_ASSIGN_OR_RETURN(o.record.key.aggregate,
                         AggregateFromJson(k.at("aggregate")));
    o.record.key.customer_name = OptionalFromJson(k.at("customer_name"));
    o.record.key.product_name = OptionalFromJson(k.at("product_name"));
    o.record.key.color = OptionalFromJson(k.at("color"));
    o.record.epsilon_spent = r.at("epsilon_spent").get<double>();
    const json& resp = r.at("response");
    o.record.response.value = resp.at("value").get<double>();
    o.record.response.epsilon_used = resp.at("epsilon_used").get<double>();
    o.record.response.reused = resp.at("reused").get<bool>();
    o.record.response.query_id = resp.at("query_id").get<std::string>();
    o.record.recorded_at = r.at("recorded_at").get<std::uint64_t>();
    o.epsilon_rem = b.at("epsilon_rem").get<double>();
    tx.payload = std::move(o);
  } else {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("unknown transaction type '", type, "'"));
  }
  return tx;
}

}  // namespace

absl::Status ExportLedgerJsonl(std::string_view channel_id, double epsilon_t,
                               std::span<const Block> chain,
                               std::ostream& out) {
  if (chain.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "chain has no genesis block");
  }
  json header{{"kind", "header"},
              {"format", std::string(kLedgerFormat)},
              {"channel_id", std::string(channel_id)},
              {"genesis_hash", ToHex(chain.front().block_hash)},
              {"epsilon_t", epsilon_t},
              {"height", chain.back().height},
              {"tip_hash", ToHex(chain.back().block_hash)}};
  out << header.dump() << '\n';
  for (const Block& b : chain) {
    for (std::size_t i = 0; i < b.txs.size(); ++i) {
      out << TxToJson(b.txs[i], b.height, i).dump() << '\n';
    }
  }
  if (!out) return MakeError(ErrorKind::kIoFailure, "ledger export failed");
  return absl::OkStatus();
}

absl::StatusOr<ImportedLedger> ImportLedgerJsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return MakeError(ErrorKind::kParseError, "missing header line");
  }
  ImportedLedger result;
  std::string genesis_hex;
  std::string tip_hex;
  std::uint64_t height = 0;
  try {
    json header = json::parse(line);
    if (header.at("kind") != "header" ||
        header.at("format").get<std::string>() != kLedgerFormat) {
      return MakeError(ErrorKind::kParseError, "unrecognized header");
    }
    result.channel_id = header.at("channel_id").get<std::string>();
    result.epsilon_t = header.at("epsilon_t").get<double>();
    genesis_hex = header.at("genesis_hash").get<std::string>();
    tip_hex = header.at("tip_hash").get<std::string>();
    height = header.at("height").get<std::uint64_t>();
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kParseError, e.what());
  }

  result.chain.push_back(MakeGenesisBlock());
  if (ToHex(result.chain.front().block_hash) != genesis_hex) {
    return MakeError(ErrorKind::kValidationFailure, "genesis hash mismatch");
  }

  std::vector<LedgerTransaction> pending;
  std::uint64_t pending_height = 1;
  auto flush = [&]() -> absl::Status {
    if (pending.empty()) return absl::OkStatus();
    EDH_ASSIGN_OR_RETURN(Block b,
                         BuildBlock(std::move(pending), result.chain.back()));
    pending.clear();
    if (b.height != pending_height) {
      return MakeError(ErrorKind::kParseError, "non-contiguous block heights");
    }
    result.chain.push_back(std::move(b));
    return absl::OkStatus();
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      const std::uint64_t h = j.at("height").get<std::uint64_t>();
      if (h != pending_height) {
        EDH_RETURN_IF_ERROR(flush());
        pending_height = h;
      }
      if (j.at("kind") != "tx" ||
          j.at("index").get<std::size_t>() != pending.size()) {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("line ", line_no, ": bad kind or index"));
      }
      EDH_ASSIGN_OR_RETURN(LedgerTransaction tx, TxFromJson(j));
      pending.push_back(std::move(tx));
    } catch (const json::exception& e) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line_no, ": ", e.what()));
    }
  }
  EDH_RETURN_IF_ERROR(flush());
  if (result.chain.back().height != height) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("expected height ", height, ", found ",
                                  result.chain.back().height));
  }
  if (ToHex(result.chain.back().block_hash) != tip_hex) {
    return MakeError(ErrorKind::kValidationFailure, "tip hash mismatch");
  }
  return result;
}

absl::Status ExportBlockDumpJsonl(std::span<const Block> chain,
                                  std::ostream& out) {
  for (const Block& b : chain) {
    json j{{"height", b.height},
           {"prev_hash", ToHex(b.prev_hash)},
           {"block_hash", ToHex(b.block_hash)},
           {"tx_count", b.txs.size()}};
    out << j.dump() << '\n';
  }
  if (!out) return MakeError(ErrorKind::kIoFailure, "block dump failed");
  return absl::OkStatus();
}

}  // namespace edh
