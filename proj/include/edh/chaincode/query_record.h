#ifndef EDH_CHAINCODE_QUERY_RECORD_H_
#define EDH_CHAINCODE_QUERY_RECORD_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "edh/common/encoding.h"
#include "edh/ledger/transaction.h"

namespace edh {

// Identity of a statistical query for reuse purposes: aggregate plus the
// normalized attribute tuple. Two queries are "repeated" iff keys are equal.
struct CategoryKey {
  Aggregate aggregate = Aggregate::kSum;
  std::optional<std::string> customer_name;
  std::optional<std::string> product_name;
  std::optional<std::string> color;

  friend bool operator==(const CategoryKey&, const CategoryKey&) = default;
  friend auto operator<=>(const CategoryKey&, const CategoryKey&) = default;

  // Human-readable form, e.g. "SUM(customer=bob,color=red)".
  std::string ToString() const;
};

struct CategoryKeyHash {
  std::size_t operator()(const CategoryKey& key) const;
};

absl::StatusOr<CategoryKey> Categorize(const QueryTransaction& q);

// The predicate a key stands for (normalized values).
QueryPredicate PredicateOf(const CategoryKey& key);

struct PerturbedResponse {
  double value = 0.0;
  double epsilon_used = 0.0;
  bool reused = false;
  std::string query_id;

  friend bool operator==(const PerturbedResponse&,
                         const PerturbedResponse&) = default;
};

// One entry of the on-ledger query log.
struct QueryRecord {
  CategoryKey key;
  double epsilon_spent = 0.0;
  PerturbedResponse response;
  std::uint64_t recorded_at = 0;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// Payload of a committed query transaction: the request, the answer the
// endorser produced, and the remaining budget the endorser observed.
// An epsilon_spent of zero marks an unperturbed (exact-mode) answer, which is
// not part of the query log.
struct QueryOutcome {
  QueryTransaction query;
  QueryRecord record;
  double epsilon_rem = 0.0;

  friend bool operator==(const QueryOutcome&, const QueryOutcome&) = default;
};

void Encode(const CategoryKey& key, CanonicalWriter& w);
void Encode(const PerturbedResponse& r, CanonicalWriter& w);
void Encode(const QueryRecord& r, CanonicalWriter& w);
void Encode(const QueryOutcome& o, CanonicalWriter& w);

}  // namespace edh

#endif  // EDH_CHAINCODE_QUERY_RECORD_H_
