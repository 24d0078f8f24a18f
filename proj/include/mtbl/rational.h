#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "mtbl/errors.h"

namespace mtbl {

// Exact arithmetic for task weights, rule scores and PRF values. Scores stay
// small (bounded by token counts times weight numerators), far from overflow.
using Rational = boost::rational<long long>;

// Accepts "3", "-2" or "7/2". Denominator must be positive.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&] { return ConfigError("bad rational value: '" + text + "'"); };
  if (text.empty()) throw bad();
  size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      size_t used = 0;
      long long n = std::stoll(text, &used);
      if (used != text.size()) throw bad();
      return Rational(n);
    }
    size_t used_n = 0, used_d = 0;
    long long n = std::stoll(text.substr(0, slash), &used_n);
    std::string den_text = text.substr(slash + 1);
    long long d = std::stoll(den_text, &used_d);
    if (used_n != slash || used_d != den_text.size() || d <= 0) throw bad();
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

inline std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace mtbl
