#ifndef EDH_COMMON_DIGEST_H_
#define EDH_COMMON_DIGEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace edh {

// SHA-256 is the project-wide block and endorsement hash.
using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kZeroDigest{};

Digest Sha256(std::span<const std::uint8_t> bytes);
Digest Sha256(std::string_view bytes);

std::string ToHex(const Digest& digest);
std::optional<Digest> DigestFromHex(std::string_view hex);

// Derives an independent 64-bit seed for a labelled sub-stream.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

}  // namespace edh

#endif  // EDH_COMMON_DIGEST_H_
