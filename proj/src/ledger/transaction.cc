#include "edh/ledger/transaction.h"

#include <algorithm>
#include <cctype>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "edh/common/status.h"

namespace edh {
namespace {

absl::Status CheckInvocation(const ContractInvocation& c) {
  if (c.contract_id.empty()) {
    return MakeError(ErrorKind::kMissingField, "contract_id is empty");
  }
  if (c.contract_version.empty()) {
    return MakeError(ErrorKind::kMissingField, "contract_version is empty");
  }
  if (c.contract_function.empty()) {
    return MakeError(ErrorKind::kMissingField, "contract_function is empty");
  }
  return absl::OkStatus();
}

bool AttributeMatches(const std::optional<std::string>& want,
                      std::string_view have) {
  return !want.has_value() ||
         NormalizeAttribute(*want) == NormalizeAttribute(have);
}

}  // namespace

std::string_view AggregateName(Aggregate aggregate) {
  switch (aggregate) {
    case Aggregate::kCount:
      return "COUNT";
    case Aggregate::kSum:
      return "SUM";
  }
  return "UNKNOWN";
}

absl::StatusOr<Aggregate> ParseAggregate(std::string_view name) {
  const std::string upper = absl::AsciiStrToUpper(absl::StripAsciiWhitespace(AsAbsl(name)));
  if (upper == "COUNT") return Aggregate::kCount;
  if (upper == "SUM") return Aggregate::kSum;
  return MakeError(ErrorKind::kUnsupportedAggregate,
                   absl::StrCat("'", AsAbsl(name), "' is not COUNT or SUM"));
}

std::string NormalizeAttribute(std::string_view value) {
  return absl::AsciiStrToLower(absl::StripAsciiWhitespace(AsAbsl(value)));
}

absl::Status ValidateWrite(const WriteTransaction& tx) {
  EDH_RETURN_IF_ERROR(CheckInvocation(tx.invocation));
  if (tx.product_name.empty()) {
    return MakeError(ErrorKind::kMissingField, "product_name is empty");
  }
  if (tx.color.empty()) {
    return MakeError(ErrorKind::kMissingField, "color is empty");
  }
  if (tx.customer_name.empty()) {
    return MakeError(ErrorKind::kMissingField, "customer_name is empty");
  }
  if (tx.quantity < kMinQuantity || tx.quantity > kMaxQuantity) {
    return MakeError(ErrorKind::kInvalidQuantity,
                     absl::StrCat("quantity ", tx.quantity, " outside [",
                                  kMinQuantity, ", ", kMaxQuantity, "]"));
  }
  return absl::OkStatus();
}

bool QueryPredicate::Matches(const WriteTransaction& tx) const {
  return AttributeMatches(customer_name, tx.customer_name) &&
         AttributeMatches(product_name, tx.product_name) &&
         AttributeMatches(color, tx.color);
}

absl::Status ValidateQuery(const QueryTransaction& q) {
  EDH_RETURN_IF_ERROR(CheckInvocation(q.invocation));
  if (!q.read_only) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "query transactions must be read-only");
  }
  if (q.requester_id.empty()) {
    return MakeError(ErrorKind::kMissingField, "requester_id is empty");
  }
  if (q.aggregate != Aggregate::kCount && q.aggregate != Aggregate::kSum) {
    return MakeError(ErrorKind::kUnsupportedAggregate,
                     "aggregate must be COUNT or SUM");
  }
  for (const auto* attr : {&q.predicate.customer_name,
                           &q.predicate.product_name, &q.predicate.color}) {
    if (attr->has_value() && NormalizeAttribute(**attr).empty()) {
      return MakeError(ErrorKind::kMissingField,
                       "predicate attribute present but blank");
    }
  }
  return absl::OkStatus();
}

void Encode(const ContractInvocation& c, CanonicalWriter& w) {
  w.PutString(c.contract_id);
  w.PutString(c.contract_version);
  w.PutString(c.contract_function);
  w.PutI64(c.timeout.count());
}

void Encode(const WriteTransaction& tx, CanonicalWriter& w) {
  Encode(tx.invocation, w);
  w.PutString(tx.product_name);
  w.PutString(tx.color);
  w.PutI64(tx.quantity);
  w.PutString(tx.customer_name);
}

void Encode(const QueryPredicate& p, CanonicalWriter& w) {
  w.PutOptionalString(p.customer_name);
  w.PutOptionalString(p.product_name);
  w.PutOptionalString(p.color);
}

void Encode(const QueryTransaction& q, CanonicalWriter& w) {
  Encode(q.invocation, w);
  w.PutBool(q.read_only);
  Encode(q.predicate, w);
  w.PutU8(static_cast<std::uint8_t>(q.aggregate));
  w.PutString(q.requester_id);
}

}  // namespace edh
