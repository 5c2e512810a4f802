#ifndef EDH_COMMON_STATUS_H_
#define EDH_COMMON_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace edh {

// Domain error kinds. Each maps onto a canonical absl code and is carried as a
// status payload so callers can distinguish e.g. InvalidQuantity from
// MissingField, which share kInvalidArgument.
enum class ErrorKind {
  kInvalidQuantity,
  kMissingField,
  kEmptyBatch,
  kNonPositiveBound,
  kNonPositiveEpsilon,
  kEpsilonBelowFloor,
  kNonPositiveSensitivity,
  kIncompatibleBinning,
  kZeroQueries,
  kEmptyProfiles,
  kExhausted,
  kUnsupportedAggregate,
  kEndorsementFailure,
  kValidationFailure,
  kNotMember,
  kUnauthorized,
  kPredicateMismatch,
  kNoCommonQueries,
  kConfigInvalid,
  kZeroActual,
  kIoFailure,
  kParseError,
  kInvalidArgument,
};

// The installed absl has its own string_view type.
inline absl::string_view AsAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the domain kind attached by MakeError, if any.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

inline bool IsError(const absl::Status& status, ErrorKind kind) {
  return ErrorKindOf(status) == kind;
}

}  // namespace edh

#define EDH_STATUS_CONCAT_INNER_(a, b) a##b
#define EDH_STATUS_CONCAT_(a, b) EDH_STATUS_CONCAT_INNER_(a, b)

#define EDH_RETURN_IF_ERROR(expr)            \
  do {                                       \
    ::absl::Status edh_status_ = (expr);     \
    if (!edh_status_.ok()) return edh_status_; \
  } while (0)

#define EDH_ASSIGN_OR_RETURN(lhs, expr) \
  EDH_ASSIGN_OR_RETURN_IMPL_(EDH_STATUS_CONCAT_(edh_statusor_, __LINE__), lhs, expr)

#define EDH_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                               \
  if (!statusor.ok()) return statusor.status();         \
  lhs = std::move(statusor).value()

#endif  // EDH_COMMON_STATUS_H_
