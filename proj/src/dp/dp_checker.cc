#include "edh/dp/dp_checker.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edh/common/status.h"

namespace edh {

Histogram::Histogram(double lo, double hi, std::size_t bins)
    : lo_(lo),
      hi_(hi),
      width_((hi - lo) / static_cast<double>(std::max<std::size_t>(bins, 1))),
      counts_(std::max<std::size_t>(bins, 1) + 2, 0) {}

void Histogram::Add(double x) {
  ++total_;
  if (x < lo_) {
    ++counts_.front();
  } else if (x >= hi_) {
    ++counts_.back();
  } else {
    std::size_t idx = static_cast<std::size_t>((x - lo_) / width_);
    idx = std::min(idx, bins() - 1);
    ++counts_[idx + 1];
  }
}

bool Histogram::SameBinning(const Histogram& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && slots() == other.slots();
}

absl::StatusOr<DpCheckResult> CheckEmpiricalDp(const Histogram& x,
                                               const Histogram& y,
                                               double epsilon,
                                               const DpCheckOptions& options) {
  if (!x.SameBinning(y)) {
    return MakeError(ErrorKind::kIncompatibleBinning,
                     "histograms use different bin edges");
  }
  if (x.total() == 0 || y.total() == 0) {
    return MakeError(ErrorKind::kIncompatibleBinning, "empty histogram");
  }
  if (epsilon < 0.0) {
    return MakeError(ErrorKind::kNonPositiveEpsilon, "epsilon must be >= 0");
  }
  const double bound = std::exp(epsilon);
  const double nx = static_cast<double>(x.total());
  const double ny = static_cast<double>(y.total());

  DpCheckResult result;
  result.worst_z = -std::numeric_limits<double>::infinity();
  // Variance taken at the boundary pa = bound * pb, with pb estimated from
  // both counts.
  auto test = [&](double pa, double na, double pb, double nb) {
    const double diff = pa - bound * pb;
    const double p0 = std::min((pa * na + pb * nb) / (bound * na + nb), 1.0 / bound);
    const double var = bound * p0 * (1.0 - bound * p0) / na +
                       bound * bound * p0 * (1.0 - p0) / nb;
    const double sd = std::sqrt(var);
    if (diff > options.sigmas * sd) result.satisfied = false;
    if (sd > 0.0) {
      result.worst_z = std::max(result.worst_z, diff / sd);
    } else if (diff > 0.0) {
      result.worst_z = std::numeric_limits<double>::infinity();
    }
  };
  for (std::size_t s = 0; s < x.slots(); ++s) {
    if (std::max(x.count(s), y.count(s)) < options.min_slot_count) continue;
    ++result.slots_checked;
    const double px = static_cast<double>(x.count(s)) / nx;
    const double py = static_cast<double>(y.count(s)) / ny;
    test(px, nx, py, ny);
    test(py, ny, px, nx);
  }
  return result;
}

absl::StatusOr<bool> EmpiricalDpRatio(const Histogram& x, const Histogram& y,
                                      double epsilon,
                                      const DpCheckOptions& options) {
  absl::StatusOr<DpCheckResult> r = CheckEmpiricalDp(x, y, epsilon, options);
  if (!r.ok()) return r.status();
  return r->satisfied;
}

}  // namespace edh
