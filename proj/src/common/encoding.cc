#include "edh/common/encoding.h"

#include <bit>
#include <string>

namespace edh {

void CanonicalWriter::PutU64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void CanonicalWriter::PutDouble(double v) {
  PutU64(std::bit_cast<std::uint64_t>(v));
}

void CanonicalWriter::PutString(std::string_view s) {
  PutU64(s.size());
  bytes_.insert(bytes_.end(), s.begin(), s.end());
}

void CanonicalWriter::PutOptionalString(const std::optional<std::string>& s) {
  PutBool(s.has_value());
  if (s.has_value()) PutString(*s);
}

void CanonicalWriter::PutDigest(const Digest& d) {
  bytes_.insert(bytes_.end(), d.begin(), d.end());
}

}  // namespace edh
