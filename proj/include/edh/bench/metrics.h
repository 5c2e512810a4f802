#ifndef EDH_BENCH_METRICS_H_
#define EDH_BENCH_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "edh/network/network.h"

namespace edh {

// |a - a_prime| / a * 100. ZeroActual when a == 0.
absl::StatusOr<double> RelativeError(double a, double a_prime);

double Accuracy(double mean_relative_error);

// (naive - edh) / naive * 100; 0 when naive is 0.
double SavingsPercent(double naive_sum, double edh_sum);

// Expected relative error of a Laplace-perturbed answer: E|noise| = lambda.
double ExpectedRelativeError(double exact, double lambda);

struct ErrorExpectation {
  double mean = 0.0;            // average of 100 * lambda_q / a_q
  double standard_error = 0.0;  // sqrt(sum (100 * lambda_q / a_q)^2) / n
};

// exact and lambda are parallel; entries with exact == 0 are skipped.
ErrorExpectation AnalyticErrorExpectation(std::span<const double> exact,
                                          std::span<const double> lambda);

struct TickSample {
  std::uint64_t tick = 0;
  std::size_t committed = 0;
  double mean_latency = 0.0;
};

// Commits and mean latency per commit tick, ascending.
std::vector<TickSample> ThroughputSeries(
    std::span<const TransactionReceipt> receipts);

}  // namespace edh

#endif  // EDH_BENCH_METRICS_H_
