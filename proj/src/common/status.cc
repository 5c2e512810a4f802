#include "edh/common/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace edh {
namespace {

constexpr absl::string_view kPayloadUrl = "type.edh/error-kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array kKinds = {
    KindInfo{ErrorKind::kInvalidQuantity, "InvalidQuantity", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMissingField, "MissingField", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kEmptyBatch, "EmptyBatch", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kNonPositiveBound, "NonPositiveBound", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kNonPositiveEpsilon, "NonPositiveEpsilon", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kEpsilonBelowFloor, "EpsilonBelowFloor", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kNonPositiveSensitivity, "NonPositiveSensitivity", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kIncompatibleBinning, "IncompatibleBinning", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kZeroQueries, "ZeroQueries", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kEmptyProfiles, "EmptyProfiles", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kExhausted, "Exhausted", absl::StatusCode::kResourceExhausted},
    KindInfo{ErrorKind::kUnsupportedAggregate, "UnsupportedAggregate", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kEndorsementFailure, "EndorsementFailure", absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kValidationFailure, "ValidationFailure", absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kNotMember, "NotMember", absl::StatusCode::kPermissionDenied},
    KindInfo{ErrorKind::kUnauthorized, "Unauthorized", absl::StatusCode::kPermissionDenied},
    KindInfo{ErrorKind::kPredicateMismatch, "PredicateMismatch", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kNoCommonQueries, "NoCommonQueries", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kConfigInvalid, "ConfigInvalid", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kZeroActual, "ZeroActual", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kIoFailure, "IoFailure", absl::StatusCode::kUnavailable},
    KindInfo{ErrorKind::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidArgument, "InvalidArgument", absl::StatusCode::kInvalidArgument},
};

const KindInfo& Lookup(ErrorKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds.back();
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Lookup(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Lookup(kind);
  absl::Status status(info.code, absl::StrCat(AsAbsl(info.name), ": ", AsAbsl(message)));
  status.SetPayload(kPayloadUrl, absl::Cord(AsAbsl(info.name)));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  if (status.ok()) return std::nullopt;
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const auto& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace edh
