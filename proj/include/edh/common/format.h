#ifndef EDH_COMMON_FORMAT_H_
#define EDH_COMMON_FORMAT_H_

#include <string>

namespace edh {

// Shortest round-trip decimal form with '.' separator, independent of locale.
std::string FormatDouble(double v);

}  // namespace edh

#endif  // EDH_COMMON_FORMAT_H_
