#include "edh/budget/accountant.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "edh/common/format.h"
#include "edh/common/status.h"

namespace edh {

absl::StatusOr<BudgetAccountant> BudgetAccountant::Create(double epsilon_t) {
  if (!(epsilon_t > 0.0) || !std::isfinite(epsilon_t)) {
    return MakeError(ErrorKind::kNonPositiveEpsilon,
                     absl::StrCat("threshold must be positive and finite, got ",
                                  epsilon_t));
  }
  return BudgetAccountant(epsilon_t);
}

double BudgetAccountant::Slack() const {
  return 1e-15 * epsilon_t_ * static_cast<double>(fresh_spends_ + 1);
}

void RunningSum::Add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double BudgetAccountant::epsilon_rem() const {
  return std::max(0.0, epsilon_t_ - accumulated());
}

bool BudgetAccountant::CanSpend(double epsilon_f) const {
  RunningSum next = spent_;
  next.Add(epsilon_f);
  return next.value() <= epsilon_t_ + Slack();
}

absl::Status BudgetAccountant::TrySpend(double epsilon_f,
                                        std::string_view query_id,
                                        std::string_view requester_id) {
  if (!(epsilon_f > 0.0) || !std::isfinite(epsilon_f)) {
    return MakeError(ErrorKind::kNonPositiveEpsilon,
                     absl::StrCat("spend must be positive, got ", epsilon_f));
  }
  if (!CanSpend(epsilon_f)) {
    return MakeError(ErrorKind::kExhausted,
                     absl::StrCat("remaining ", epsilon_rem(), " < requested ",
                                  epsilon_f, " for query ", AsAbsl(query_id)));
  }
  spent_.Add(epsilon_f);
  ++fresh_spends_;
  log_.push_back(SpendEntry{std::string(query_id), std::string(requester_id),
                            epsilon_f, epsilon_rem(), false});
  return absl::OkStatus();
}

void BudgetAccountant::LogReuse(std::string_view query_id,
                                std::string_view requester_id) {
  log_.push_back(SpendEntry{std::string(query_id), std::string(requester_id),
                            0.0, epsilon_rem(), true});
}

void WriteSpendLogCsv(std::span<const SpendEntry> log, std::ostream& out) {
  out << "query_id,requester_id,epsilon_f,epsilon_rem,reused_flag\n";
  for (const SpendEntry& e : log) {
    out << e.query_id << ',' << e.requester_id << ','
        << FormatDouble(e.epsilon_f) << ',' << FormatDouble(e.epsilon_rem)
        << ',' << (e.reused ? 1 : 0) << '\n';
  }
}

}  // namespace edh
