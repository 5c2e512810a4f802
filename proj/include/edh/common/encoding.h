#ifndef EDH_COMMON_ENCODING_H_
#define EDH_COMMON_ENCODING_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "edh/common/digest.h"

namespace edh {

// Length-prefixed, field-ordered little-endian encoding used for hashing and
// for byte-comparing world states. Doubles are written by bit pattern.
class CanonicalWriter {
 public:
  void PutU8(std::uint8_t v) { bytes_.push_back(v); }
  void PutU64(std::uint64_t v);
  void PutI64(std::int64_t v) { PutU64(static_cast<std::uint64_t>(v)); }
  void PutDouble(double v);
  void PutBool(bool v) { PutU8(v ? 1 : 0); }
  void PutString(std::string_view s);
  void PutOptionalString(const std::optional<std::string>& s);
  void PutDigest(const Digest& d);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> Release() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

}  // namespace edh

#endif  // EDH_COMMON_ENCODING_H_
