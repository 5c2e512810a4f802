#include "edh/chaincode/query_record.h"

#include <functional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "edh/common/status.h"

namespace edh {
namespace {

std::optional<std::string> NormalizeOptional(
    const std::optional<std::string>& v) {
  if (!v.has_value()) return std::nullopt;
  return NormalizeAttribute(*v);
}

void HashCombine(std::size_t& seed, std::size_t h) {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

std::string CategoryKey::ToString() const {
  std::vector<std::string> parts;
  if (customer_name) parts.push_back(absl::StrCat("customer=", *customer_name));
  if (product_name) parts.push_back(absl::StrCat("product=", *product_name));
  if (color) parts.push_back(absl::StrCat("color=", *color));
  return absl::StrCat(AsAbsl(AggregateName(aggregate)), "(", absl::StrJoin(parts, ","),
                      ")");
}

std::size_t CategoryKeyHash::operator()(const CategoryKey& key) const {
  std::size_t seed = static_cast<std::size_t>(key.aggregate);
  std::hash<std::string> h;
  for (const auto* attr : {&key.customer_name, &key.product_name, &key.color}) {
    HashCombine(seed, attr->has_value() ? h(**attr) + 1 : 0);
  }
  return seed;
}

absl::StatusOr<CategoryKey> Categorize(const QueryTransaction& q) {
  if (q.aggregate != Aggregate::kCount && q.aggregate != Aggregate::kSum) {
    return MakeError(ErrorKind::kUnsupportedAggregate,
                     "aggregate must be COUNT or SUM");
  }
  CategoryKey key;
  key.aggregate = q.aggregate;
  key.customer_name = NormalizeOptional(q.predicate.customer_name);
  key.product_name = NormalizeOptional(q.predicate.product_name);
  key.color = NormalizeOptional(q.predicate.color);
  return key;
}

QueryPredicate PredicateOf(const CategoryKey& key) {
  return QueryPredicate{key.customer_name, key.product_name, key.color};
}

void Encode(const CategoryKey& key, CanonicalWriter& w) {
  w.PutU8(static_cast<std::uint8_t>(key.aggregate));
  w.PutOptionalString(key.customer_name);
  w.PutOptionalString(key.product_name);
  w.PutOptionalString(key.color);
}

void Encode(const PerturbedResponse& r, CanonicalWriter& w) {
  w.PutDouble(r.value);
  w.PutDouble(r.epsilon_used);
  w.PutBool(r.reused);
  w.PutString(r.query_id);
}

void Encode(const QueryRecord& r, CanonicalWriter& w) {
  Encode(r.key, w);
  w.PutDouble(r.epsilon_spent);
  Encode(r.response, w);
  w.PutU64(r.recorded_at);
}

void Encode(const QueryOutcome& o, CanonicalWriter& w) {
  Encode(o.query, w);
  Encode(o.record, w);
  w.PutDouble(o.epsilon_rem);
}

}  // namespace edh
