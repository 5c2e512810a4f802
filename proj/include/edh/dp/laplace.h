#ifndef EDH_DP_LAPLACE_H_
#define EDH_DP_LAPLACE_H_

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

#include "absl/status/statusor.h"
#include "edh/ledger/transaction.h"

namespace edh {

// Smallest epsilon accepted by the mechanism API.
inline constexpr double kMinEpsilon = 1e-6;

struct LaplaceParams {
  double mu = 0.0;
  double lambda = 1.0;  // scale, > 0
};

absl::Status ValidateParams(const LaplaceParams& params);

struct SensitivitySpec {
  Aggregate aggregate = Aggregate::kSum;
  double max_contribution = 100.0;  // per-transaction bound for SUM
};

// COUNT -> 1, SUM -> max_contribution.
absl::StatusOr<double> Sensitivity(const SensitivitySpec& spec);

// delta_f / epsilon.
absl::StatusOr<double> LaplaceScale(double epsilon, double delta_f);

// Anything producing uniforms on the open interval (0, 1).
template <typename T>
concept UniformSource = requires(T& source) {
  { source.NextUniform() } -> std::convertible_to<double>;
};

// Seeded mt19937_64 stream; one 64-bit draw per uniform. Deterministic for a
// fixed (seed, draw index).
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  double NextUniform() {
    ++draws_;
    return UniformFromBits(engine_());
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  // Midpoint of the (bits >> 12)-th of 2^52 equal cells, never 0 or 1.
  static double UniformFromBits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
};

// mu - lambda * sign(u - 1/2) * ln(1 - 2|u - 1/2|)
inline double LaplaceInverseCdf(double mu, double lambda, double u) {
  const double d = u - 0.5;
  const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  return mu - lambda * sign * std::log(1.0 - 2.0 * std::fabs(d));
}

// One draw from Laplace(mu, lambda) by inverse-CDF transform of one uniform.
template <UniformSource Rng>
double LaplaceSample(const LaplaceParams& params, Rng& rng) {
  return LaplaceInverseCdf(params.mu, params.lambda, rng.NextUniform());
}

// true_value + Laplace(0, sensitivity / epsilon). No clamping or rounding.
template <UniformSource Rng>
absl::StatusOr<double> Perturb(double true_value, double epsilon,
                               const SensitivitySpec& spec, Rng& rng) {
  absl::StatusOr<double> delta_f = Sensitivity(spec);
  if (!delta_f.ok()) return delta_f.status();
  absl::StatusOr<double> lambda = LaplaceScale(epsilon, *delta_f);
  if (!lambda.ok()) return lambda.status();
  return true_value + LaplaceSample(LaplaceParams{0.0, *lambda}, rng);
}

// Presentation-layer rounding for counts; never applied to stored answers.
inline double RoundForPresentation(double value) { return std::round(value); }

}  // namespace edh

#endif  // EDH_DP_LAPLACE_H_
