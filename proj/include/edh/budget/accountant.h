#ifndef EDH_BUDGET_ACCOUNTANT_H_
#define EDH_BUDGET_ACCOUNTANT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace edh {

struct SpendEntry {
  std::string query_id;
  std::string requester_id;
  double epsilon_f = 0.0;  // zero for reused answers
  double epsilon_rem = 0.0;
  bool reused = false;

  friend bool operator==(const SpendEntry&, const SpendEntry&) = default;
};

// Neumaier-compensated running sum.
class RunningSum {
 public:
  void Add(double x);
  double value() const { return sum_ + comp_; }

  friend bool operator==(const RunningSum&, const RunningSum&) = default;

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Tracks privacy budget spent against the threshold epsilon_t for one data
// provider's channel ledger. Spending is sequential composition: the total
// loss is the plain sum of per-answer epsilons.
//
// The running sum is compensated, so m spends of the same epsilon total
// exactly m * epsilon. A spend is admitted only if it fits in the remaining
// budget, up to a slack of 1e-15 * epsilon_t per logged spend that absorbs
// decimal inputs such as 0.1 + 0.2 under epsilon_t = 0.3. The slack is far
// below the 1e-6 epsilon floor.
class BudgetAccountant {
 public:
  static absl::StatusOr<BudgetAccountant> Create(double epsilon_t);

  // On success epsilon_rem drops by epsilon_f and an entry is logged. On
  // Exhausted nothing changes.
  absl::Status TrySpend(double epsilon_f, std::string_view query_id,
                        std::string_view requester_id);

  // Logs a cached answer served without spending.
  void LogReuse(std::string_view query_id, std::string_view requester_id);

  bool CanSpend(double epsilon_f) const;

  double epsilon_t() const { return epsilon_t_; }
  double epsilon_rem() const;
  double accumulated() const { return spent_.value(); }
  std::size_t fresh_spends() const { return fresh_spends_; }
  const std::vector<SpendEntry>& spend_log() const { return log_; }

  friend bool operator==(const BudgetAccountant&,
                         const BudgetAccountant&) = default;

 private:
  explicit BudgetAccountant(double epsilon_t) : epsilon_t_(epsilon_t) {}

  double Slack() const;

  double epsilon_t_ = 0.0;
  RunningSum spent_;
  std::size_t fresh_spends_ = 0;
  std::vector<SpendEntry> log_;
};

// CSV columns: query_id,requester_id,epsilon_f,epsilon_rem,reused_flag
void WriteSpendLogCsv(std::span<const SpendEntry> log, std::ostream& out);

}  // namespace edh

#endif  // EDH_BUDGET_ACCOUNTANT_H_
