#include "edh/bench/metrics.h"

#include <cmath>
#include <map>

namespace edh {

absl::StatusOr<double> RelativeError(double a, double a_prime) {
  if (a == 0.0) {
    return MakeError(ErrorKind::kZeroActual,
                     "relative error is undefined for a zero actual value");
  }
  return std::abs(a - a_prime) / a * 100.0;
}

double Accuracy(double mean_relative_error) {
  return 100.0 - mean_relative_error;
}

double SavingsPercent(double naive_sum, double edh_sum) {
  if (naive_sum == 0.0) return 0.0;
  return (naive_sum - edh_sum) / naive_sum * 100.0;
}

double ExpectedRelativeError(double exact, double lambda) {
  return 100.0 * lambda / exact;
}

ErrorExpectation AnalyticErrorExpectation(std::span<const double> exact,
                                          std::span<const double> lambda) {
  ErrorExpectation out;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < exact.size() && i < lambda.size(); ++i) {
    if (exact[i] == 0.0) continue;
    const double c = ExpectedRelativeError(exact[i], lambda[i]);
    sum += c;
    sum_sq += c * c;
    ++n;
  }
  if (n == 0) return out;
  out.mean = sum / static_cast<double>(n);
  out.standard_error = std::sqrt(sum_sq) / static_cast<double>(n);
  return out;
}

std::vector<TickSample> ThroughputSeries(
    std::span<const TransactionReceipt> receipts) {
  std::map<std::uint64_t, std::pair<std::size_t, std::uint64_t>> by_tick;
  for (const TransactionReceipt& r : receipts) {
    if (!r.committed()) continue;
    auto& [count, latency] = by_tick[*r.commit_tick];
    ++count;
    latency += *r.commit_tick - r.submit_tick;
  }
  std::vector<TickSample> out;
  out.reserve(by_tick.size());
  for (const auto& [tick, agg] : by_tick) {
    out.push_back({tick, agg.first,
                   static_cast<double>(agg.second) /
                       static_cast<double>(agg.first)});
  }
  return out;
}

}  // namespace edh
