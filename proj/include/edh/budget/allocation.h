#ifndef EDH_BUDGET_ALLOCATION_H_
#define EDH_BUDGET_ALLOCATION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "absl/status/statusor.h"

namespace edh {

enum class TrustClass { kEqual, kWeighted };

struct RequesterProfile {
  std::string requester_id;
  TrustClass trust_class = TrustClass::kEqual;
  double weight = 1.0;  // only read for kWeighted
};

struct RequesterDemand {
  RequesterProfile profile;
  std::uint64_t query_count = 0;
};

// epsilon_t / n_queries.
absl::StatusOr<double> AllocateEqual(double epsilon_t, std::uint64_t n_queries);

// Per-query epsilon for each requester, proportional to its weight:
//   eps_i = epsilon_t * w_i / sum_j(w_j * count_j)
// so the whole demand sums back to epsilon_t. A lower weight buys a smaller
// epsilon, i.e. stronger privacy against that requester. kEqual profiles have
// weight 1.
absl::StatusOr<std::map<std::string, double>> AllocateWeighted(
    std::span<const RequesterDemand> demands, double epsilon_t);

}  // namespace edh

#endif  // EDH_BUDGET_ALLOCATION_H_
