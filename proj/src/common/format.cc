#include "edh/common/format.h"

#include <array>
#include <charconv>

namespace edh {

std::string FormatDouble(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace edh
