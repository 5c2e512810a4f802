#include "edh/dp/laplace.h"

#include "absl/strings/str_cat.h"
#include "edh/common/status.h"

namespace edh {

absl::Status ValidateParams(const LaplaceParams& params) {
  if (!std::isfinite(params.mu)) {
    return MakeError(ErrorKind::kInvalidArgument, "mu must be finite");
  }
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("lambda must be positive, got ",
                                  params.lambda));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> Sensitivity(const SensitivitySpec& spec) {
  if (!(spec.max_contribution > 0.0) || !std::isfinite(spec.max_contribution)) {
    return MakeError(ErrorKind::kNonPositiveBound,
                     absl::StrCat("max_contribution must be positive, got ",
                                  spec.max_contribution));
  }
  switch (spec.aggregate) {
    case Aggregate::kCount:
      return 1.0;
    case Aggregate::kSum:
      return spec.max_contribution;
  }
  return MakeError(ErrorKind::kUnsupportedAggregate, "unknown aggregate");
}

absl::StatusOr<double> LaplaceScale(double epsilon, double delta_f) {
  if (!(epsilon > 0.0)) {
    return MakeError(ErrorKind::kNonPositiveEpsilon,
                     absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  if (epsilon < kMinEpsilon) {
    return MakeError(ErrorKind::kEpsilonBelowFloor,
                     absl::StrCat("epsilon ", epsilon, " below floor ",
                                  kMinEpsilon));
  }
  if (!(delta_f > 0.0)) {
    return MakeError(ErrorKind::kNonPositiveSensitivity,
                     absl::StrCat("sensitivity must be positive, got ",
                                  delta_f));
  }
  return delta_f / epsilon;
}

}  // namespace edh
