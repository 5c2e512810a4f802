#ifndef EDH_BENCH_WORKLOAD_H_
#define EDH_BENCH_WORKLOAD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/chaincode/query_record.h"
#include "edh/ledger/transaction.h"

namespace edh {

// How each query's epsilon_f is chosen.
struct EpsilonStrategy {
  enum class Kind {
    kFixed,            // every query asks for `value`
    kEqualSplit,       // epsilon_t / n_queries
    kWeighted,         // per-requester share from AllocateWeighted
    kRange,            // uniform on the grid min, min+step, ..., max
    kCalibratedRange,  // grid values whose fresh and repeat sums hit targets
  };
  Kind kind = Kind::kRange;
  double value = 0.1;
  double min = 0.01;
  double max = 0.12;
  double step = 0.01;
  double fresh_total = 0.0;
  double repeat_total = 0.0;
};

struct RequesterSpec {
  std::string requester_id;
  std::size_t count = 0;
  double weight = 1.0;
};

struct WorkloadConfig {
  std::size_t n_writes = 500;
  std::vector<std::string> customers = {"Bob", "Claire", "David", "Ali",
                                        "Alice"};
  std::vector<std::string> products = {"laptop", "phone", "tablet", "camera"};
  std::vector<std::string> colors = {"red", "blue", "green", "black"};
  std::int64_t quantity_min = 1;
  std::int64_t quantity_max = 100;
  std::size_t n_queries = 150;
  // Exactly one of these is used; `repeats` wins when set.
  double repeat_ratio = 0.2;
  std::optional<std::size_t> repeats;
  std::vector<Aggregate> aggregates = {Aggregate::kSum};
  std::vector<RequesterSpec> requesters;  // empty: one "analyst"
  std::size_t writes_per_tick = 10;
  std::size_t queries_per_tick = 10;
  double epsilon_t = 20.0;
  EpsilonStrategy epsilon;
  std::uint64_t seed = 42;
};

absl::Status ValidateWorkload(const WorkloadConfig& cfg);

// Number of repeated queries the config asks for.
std::size_t RepeatCount(const WorkloadConfig& cfg);

// Every distinct query category the config can produce: each aggregate over
// (customer | any) x (product | any) x (color | any).
std::vector<CategoryKey> CategorySpace(const WorkloadConfig& cfg);

struct ScheduledQuery {
  QueryTransaction query;
  CategoryKey key;
  double epsilon_f = 0.0;
  bool is_repeat = false;  // key already issued earlier in the stream
};

struct Workload {
  std::vector<WriteTransaction> writes;
  std::vector<ScheduledQuery> queries;
};

// Deterministic for cfg.seed. The query stream holds n_queries - R distinct
// categories plus R repeats of earlier ones, R = RepeatCount(cfg).
absl::StatusOr<Workload> GenerateWorkload(const WorkloadConfig& cfg);

ContractInvocation WriteInvocation();
ContractInvocation QueryInvocation();

}  // namespace edh

#endif  // EDH_BENCH_WORKLOAD_H_
