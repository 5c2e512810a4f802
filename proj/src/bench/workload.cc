#include "edh/bench/workload.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "absl/strings/str_cat.h"
#include "edh/budget/allocation.h"
#include "edh/common/digest.h"
#include "edh/common/status.h"

namespace edh {
namespace {

absl::Status Invalid(std::string_view msg) {
  return MakeError(ErrorKind::kConfigInvalid, msg);
}

// Grid point k of a step grid, computed as k / (1/step) when 1/step is an
// integer so that e.g. 7 * 0.01 comes out as the double nearest 0.07.
double GridValue(std::int64_t k, double step) {
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) < 1e-9) return static_cast<double>(k) / rounded;
  return static_cast<double>(k) * step;
}

std::int64_t GridIndex(double value, double step) {
  return static_cast<std::int64_t>(std::llround(value / step));
}

// n grid indices in [lo, hi] with the given sum, otherwise uniform.
absl::StatusOr<std::vector<std::int64_t>> IndicesWithSum(
    std::size_t n, std::int64_t lo, std::int64_t hi, std::int64_t target,
    std::mt19937_64& rng) {
  const auto count = static_cast<std::int64_t>(n);
  if (n == 0) {
    if (target != 0) return Invalid("calibration target with no queries");
    return std::vector<std::int64_t>{};
  }
  if (target < lo * count || target > hi * count) {
    return Invalid(absl::StrCat("calibration total unreachable with ", n,
                                " queries on the grid"));
  }
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  std::uniform_int_distribution<std::size_t> which(0, n - 1);
  std::vector<std::int64_t> ks(n);
  std::int64_t sum = 0;
  for (auto& k : ks) {
    k = pick(rng);
    sum += k;
  }
  while (sum != target) {
    std::int64_t& k = ks[which(rng)];
    if (sum < target && k < hi) {
      ++k;
      ++sum;
    } else if (sum > target && k > lo) {
      --k;
      --sum;
    }
  }
  return ks;
}

}  // namespace

ContractInvocation WriteInvocation() {
  return {"edh-cc", "1.0", "recordPurchase", std::chrono::milliseconds(30000)};
}

ContractInvocation QueryInvocation() {
  return {"edh-cc", "1.0", "queryStatistics", std::chrono::milliseconds(30000)};
}

std::size_t RepeatCount(const WorkloadConfig& cfg) {
  if (cfg.repeats) return *cfg.repeats;
  return static_cast<std::size_t>(
      std::llround(cfg.repeat_ratio * static_cast<double>(cfg.n_queries)));
}

std::vector<CategoryKey> CategorySpace(const WorkloadConfig& cfg) {
  auto with_any = [](const std::vector<std::string>& values) {
    std::set<std::optional<std::string>> out = {std::nullopt};
    for (const std::string& v : values) out.insert(NormalizeAttribute(v));
    return std::vector<std::optional<std::string>>(out.begin(), out.end());
  };
  const auto customers = with_any(cfg.customers);
  const auto products = with_any(cfg.products);
  const auto colors = with_any(cfg.colors);
  std::set<Aggregate> aggregates(cfg.aggregates.begin(), cfg.aggregates.end());
  std::vector<CategoryKey> keys;
  for (Aggregate a : aggregates) {
    for (const auto& c : customers) {
      for (const auto& p : products) {
        for (const auto& col : colors) keys.push_back(CategoryKey{a, c, p, col});
      }
    }
  }
  return keys;
}

absl::Status ValidateWorkload(const WorkloadConfig& cfg) {
  if (cfg.customers.empty() || cfg.products.empty() || cfg.colors.empty()) {
    return Invalid("customers, products and colors must be non-empty");
  }
  if (cfg.quantity_min < kMinQuantity || cfg.quantity_max > kMaxQuantity ||
      cfg.quantity_min > cfg.quantity_max) {
    return Invalid(absl::StrCat("quantity range must lie within [",
                                kMinQuantity, ", ", kMaxQuantity, "]"));
  }
  if (!(cfg.repeat_ratio >= 0.0 && cfg.repeat_ratio <= 1.0)) {
    return Invalid("repeat_ratio must be in [0, 1]");
  }
  if (cfg.writes_per_tick == 0 || cfg.queries_per_tick == 0) {
    return Invalid("rates must be positive");
  }
  if (cfg.aggregates.empty()) return Invalid("aggregates must be non-empty");
  if (!(cfg.epsilon_t > 0.0) || !std::isfinite(cfg.epsilon_t)) {
    return Invalid("epsilon_t must be positive");
  }
  const std::size_t repeats = RepeatCount(cfg);
  if (repeats > cfg.n_queries) return Invalid("more repeats than queries");
  const std::size_t distinct = cfg.n_queries - repeats;
  if (cfg.n_queries > 0 && distinct == 0) {
    return Invalid("a repeated query needs at least one distinct query");
  }
  if (distinct > CategorySpace(cfg).size()) {
    return Invalid(absl::StrCat(distinct, " distinct queries requested but only ",
                                CategorySpace(cfg).size(), " categories exist"));
  }
  if (!cfg.requesters.empty()) {
    std::size_t total = 0;
    for (const RequesterSpec& r : cfg.requesters) {
      if (r.requester_id.empty()) return Invalid("requester id is empty");
      total += r.count;
    }
    if (total != cfg.n_queries) {
      return Invalid("requester counts must sum to n_queries");
    }
  }
  const EpsilonStrategy& e = cfg.epsilon;
  using Kind = EpsilonStrategy::Kind;
  if (e.kind == Kind::kFixed && !(e.value > 0.0)) {
    return Invalid("fixed epsilon must be positive");
  }
  if (e.kind == Kind::kRange || e.kind == Kind::kCalibratedRange) {
    if (!(e.step > 0.0) || !(e.min > 0.0) || e.max < e.min) {
      return Invalid("epsilon range needs 0 < min <= max and step > 0");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Workload> GenerateWorkload(const WorkloadConfig& cfg) {
  EDH_RETURN_IF_ERROR(ValidateWorkload(cfg));
  std::mt19937_64 rng(DeriveSeed(cfg.seed, "workload"));
  Workload w;

  std::uniform_int_distribution<std::size_t> customer(0, cfg.customers.size() - 1);
  std::uniform_int_distribution<std::size_t> product(0, cfg.products.size() - 1);
  std::uniform_int_distribution<std::size_t> color(0, cfg.colors.size() - 1);
  std::uniform_int_distribution<std::int64_t> quantity(cfg.quantity_min,
                                                       cfg.quantity_max);
  w.writes.reserve(cfg.n_writes);
  for (std::size_t i = 0; i < cfg.n_writes; ++i) {
    WriteTransaction tx;
    tx.invocation = WriteInvocation();
    tx.customer_name = cfg.customers[customer(rng)];
    tx.product_name = cfg.products[product(rng)];
    tx.color = cfg.colors[color(rng)];
    tx.quantity = quantity(rng);
    w.writes.push_back(std::move(tx));
  }

  // Distinct categories in random order, then each repeat is inserted after
  // the first occurrence of a random earlier key.
  std::vector<CategoryKey> space = CategorySpace(cfg);
  std::shuffle(space.begin(), space.end(), rng);
  const std::size_t repeats = RepeatCount(cfg);
  const std::size_t distinct = cfg.n_queries - repeats;
  std::vector<std::pair<CategoryKey, bool>> stream;
  stream.reserve(cfg.n_queries);
  for (std::size_t i = 0; i < distinct; ++i) stream.emplace_back(space[i], false);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::uniform_int_distribution<std::size_t> src(0, stream.size() - 1);
    const std::size_t from = src(rng);
    std::uniform_int_distribution<std::size_t> pos(from + 1, stream.size());
    const std::size_t at = pos(rng);
    CategoryKey key = stream[from].first;
    stream.insert(stream.begin() + static_cast<std::ptrdiff_t>(at),
                  {std::move(key), true});
  }

  std::vector<std::string> requester_of(cfg.n_queries, "analyst");
  if (!cfg.requesters.empty()) {
    requester_of.clear();
    for (const RequesterSpec& r : cfg.requesters) {
      requester_of.insert(requester_of.end(), r.count, r.requester_id);
    }
    std::shuffle(requester_of.begin(), requester_of.end(), rng);
  }

  std::vector<double> eps(cfg.n_queries, 0.0);
  using Kind = EpsilonStrategy::Kind;
  const EpsilonStrategy& e = cfg.epsilon;
  switch (e.kind) {
    case Kind::kFixed:
      std::fill(eps.begin(), eps.end(), e.value);
      break;
    case Kind::kEqualSplit: {
      EDH_ASSIGN_OR_RETURN(double share,
                           AllocateEqual(cfg.epsilon_t, cfg.n_queries));
      std::fill(eps.begin(), eps.end(), share);
      break;
    }
    case Kind::kWeighted: {
      std::vector<RequesterDemand> demands;
      if (cfg.requesters.empty()) {
        demands.push_back({{"analyst", TrustClass::kEqual, 1.0}, cfg.n_queries});
      }
      for (const RequesterSpec& r : cfg.requesters) {
        demands.push_back(
            {{r.requester_id, TrustClass::kWeighted, r.weight}, r.count});
      }
      EDH_ASSIGN_OR_RETURN(auto shares,
                           AllocateWeighted(demands, cfg.epsilon_t));
      for (std::size_t i = 0; i < eps.size(); ++i) {
        eps[i] = shares.at(requester_of[i]);
      }
      break;
    }
    case Kind::kRange:
    case Kind::kCalibratedRange: {
      const std::int64_t lo = GridIndex(e.min, e.step);
      const std::int64_t hi = GridIndex(e.max, e.step);
      if (e.kind == Kind::kRange) {
        std::uniform_int_distribution<std::int64_t> pick(lo, hi);
        for (double& x : eps) x = GridValue(pick(rng), e.step);
        break;
      }
      EDH_ASSIGN_OR_RETURN(
          std::vector<std::int64_t> fresh,
          IndicesWithSum(distinct, lo, hi, GridIndex(e.fresh_total, e.step),
                         rng));
      EDH_ASSIGN_OR_RETURN(
          std::vector<std::int64_t> again,
          IndicesWithSum(repeats, lo, hi, GridIndex(e.repeat_total, e.step),
                         rng));
      std::size_t fi = 0;
      std::size_t ri = 0;
      for (std::size_t i = 0; i < stream.size(); ++i) {
        eps[i] = GridValue(stream[i].second ? again[ri++] : fresh[fi++], e.step);
      }
      break;
    }
  }

  w.queries.reserve(cfg.n_queries);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    ScheduledQuery sq;
    sq.key = stream[i].first;
    sq.is_repeat = stream[i].second;
    sq.epsilon_f = eps[i];
    sq.query.invocation = QueryInvocation();
    sq.query.read_only = true;
    sq.query.predicate = PredicateOf(sq.key);
    sq.query.aggregate = sq.key.aggregate;
    sq.query.requester_id = requester_of[i];
    w.queries.push_back(std::move(sq));
  }
  return w;
}

}  // namespace edh
