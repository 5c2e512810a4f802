#include "edh/budget/allocation.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "edh/common/status.h"

namespace edh {
namespace {

absl::Status CheckThreshold(double epsilon_t) {
  if (!(epsilon_t > 0.0) || !std::isfinite(epsilon_t)) {
    return MakeError(ErrorKind::kNonPositiveEpsilon,
                     absl::StrCat("epsilon_t must be positive, got ", epsilon_t));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> AllocateEqual(double epsilon_t,
                                     std::uint64_t n_queries) {
  EDH_RETURN_IF_ERROR(CheckThreshold(epsilon_t));
  if (n_queries == 0) {
    return MakeError(ErrorKind::kZeroQueries, "cannot split over zero queries");
  }
  return epsilon_t / static_cast<double>(n_queries);
}

absl::StatusOr<std::map<std::string, double>> AllocateWeighted(
    std::span<const RequesterDemand> demands, double epsilon_t) {
  EDH_RETURN_IF_ERROR(CheckThreshold(epsilon_t));
  if (demands.empty()) {
    return MakeError(ErrorKind::kEmptyProfiles, "no requester profiles");
  }
  double denominator = 0.0;
  for (const RequesterDemand& d : demands) {
    double w = d.profile.weight;
    if (d.profile.trust_class == TrustClass::kEqual) {
      w = 1.0;
    } else if (!(w > 0.0) || !std::isfinite(w)) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("weight for ", d.profile.requester_id,
                                    " must be finite and positive"));
    }
    denominator += w * static_cast<double>(d.query_count);
  }
  if (!(denominator > 0.0)) {
    return MakeError(ErrorKind::kEmptyProfiles,
                     "total weighted query demand is zero");
  }
  std::map<std::string, double> out;
  for (const RequesterDemand& d : demands) {
    double w = d.profile.trust_class == TrustClass::kEqual ? 1.0
                                                           : d.profile.weight;
    out[d.profile.requester_id] = epsilon_t * w / denominator;
  }
  return out;
}

}  // namespace edh
