#ifndef EDH_DP_DP_CHECKER_H_
#define EDH_DP_DP_CHECKER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"

namespace edh {

// Fixed-width histogram over [lo, hi) with an underflow and an overflow bin,
// so every sample lands somewhere.
class Histogram {
 public:
  Histogram(double lo, double hi, std::size_t bins);

  void Add(double x);

  // Index 0 is underflow, bins()+1 is overflow.
  std::size_t slots() const { return counts_.size(); }
  std::uint64_t count(std::size_t slot) const { return counts_[slot]; }
  std::uint64_t total() const { return total_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t bins() const { return counts_.size() - 2; }

  bool SameBinning(const Histogram& other) const;

 private:
  double lo_;
  double hi_;
  double width_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct DpCheckOptions {
  // A slot is tested when either side has at least this many samples.
  std::uint64_t min_slot_count = 100;
  double sigmas = 3.0;
};

struct DpCheckResult {
  bool satisfied = true;
  std::size_t slots_checked = 0;
  // Largest (P_a - e^eps P_b) / sigma over all tested slots and directions.
  double worst_z = 0.0;
};

// Empirical check of P_x(S) <= e^eps * P_y(S) (and symmetrically) on each
// populated slot. The slack is `sigmas` binomial standard deviations of
// P̂_a - e^eps P̂_b, evaluated where the inequality is tight.
absl::StatusOr<DpCheckResult> CheckEmpiricalDp(const Histogram& x,
                                               const Histogram& y,
                                               double epsilon,
                                               const DpCheckOptions& options = {});

absl::StatusOr<bool> EmpiricalDpRatio(const Histogram& x, const Histogram& y,
                                      double epsilon,
                                      const DpCheckOptions& options = {});

}  // namespace edh

#endif  // EDH_DP_DP_CHECKER_H_
