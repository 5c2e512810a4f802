#ifndef EDH_LEDGER_TRANSACTION_H_
#define EDH_LEDGER_TRANSACTION_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "edh/common/encoding.h"

namespace edh {

// Bounds on items purchased in a single write transaction.
inline constexpr std::int64_t kMinQuantity = 1;
inline constexpr std::int64_t kMaxQuantity = 100;

enum class Aggregate { kCount, kSum };

std::string_view AggregateName(Aggregate aggregate);

// Accepts COUNT/SUM in any case; anything else is UnsupportedAggregate.
absl::StatusOr<Aggregate> ParseAggregate(std::string_view name);

// Case-folded, whitespace-trimmed attribute value.
std::string NormalizeAttribute(std::string_view value);

struct ContractInvocation {
  std::string contract_id;
  std::string contract_version;
  std::string contract_function;
  std::chrono::milliseconds timeout{0};

  friend bool operator==(const ContractInvocation&,
                         const ContractInvocation&) = default;
};

// A purchase record: quantity items of (product, color) bought by customer.
struct WriteTransaction {
  ContractInvocation invocation;
  std::string product_name;
  std::string color;
  std::int64_t quantity = 0;
  std::string customer_name;

  friend bool operator==(const WriteTransaction&,
                         const WriteTransaction&) = default;
};

absl::Status ValidateWrite(const WriteTransaction& tx);

// Conjunction of equality constraints; an absent attribute matches anything.
struct QueryPredicate {
  std::optional<std::string> customer_name;
  std::optional<std::string> product_name;
  std::optional<std::string> color;

  bool Matches(const WriteTransaction& tx) const;

  friend bool operator==(const QueryPredicate&,
                         const QueryPredicate&) = default;
};

struct QueryTransaction {
  ContractInvocation invocation;
  bool read_only = true;
  QueryPredicate predicate;
  Aggregate aggregate = Aggregate::kSum;
  std::string requester_id;

  friend bool operator==(const QueryTransaction&,
                         const QueryTransaction&) = default;
};

absl::Status ValidateQuery(const QueryTransaction& q);

void Encode(const ContractInvocation& c, CanonicalWriter& w);
void Encode(const WriteTransaction& tx, CanonicalWriter& w);
void Encode(const QueryPredicate& p, CanonicalWriter& w);
void Encode(const QueryTransaction& q, CanonicalWriter& w);

}  // namespace edh

#endif  // EDH_LEDGER_TRANSACTION_H_
