#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mtbl {

// True if s is well formed UTF-8 (no overlongs, surrogates, or values past
// U+10FFFF).
inline bool utf8_valid(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b = s[i];
    size_t len;
    uint32_t cp, min;
    if (b < 0x80) {
      ++i;
      continue;
    } else if ((b & 0xe0) == 0xc0) {
      len = 2; cp = b & 0x1f; min = 0x80;
    } else if ((b & 0xf0) == 0xe0) {
      len = 3; cp = b & 0x0f; min = 0x800;
    } else if ((b & 0xf8) == 0xf0) {
      len = 4; cp = b & 0x07; min = 0x10000;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (size_t k = 1; k < len; ++k) {
      unsigned char c = s[i + k];
      if ((c & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3f);
    }
    if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len;
  }
  return true;
}

// Splits valid UTF-8 into one string per Unicode scalar value.
inline std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b = s[i];
    size_t len = b < 0x80 ? 1 : (b & 0xe0) == 0xc0 ? 2 : (b & 0xf0) == 0xe0 ? 3 : 4;
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace mtbl
