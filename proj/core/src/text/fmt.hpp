#pragma once

#include <charconv>
#include <string>

namespace spdsim::text {

// Shortest decimal form that parses back to the same double. Output files and
// rendered models rely on this being lossless.
inline std::string fmtDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string fmtSeconds(double seconds) { return fmtDouble(seconds) + "s"; }

inline std::string fmtPercent(double value) { return fmtDouble(value) + "%"; }

}  // namespace spdsim::text
