#pragma once

#include <cstdint>
#include <string_view>

namespace qhj {

// FNV-1a, 64-bit. Used to pin golden expression texts; any edit to a golden
// must be accompanied by a manifest update, which is the point.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace qhj
