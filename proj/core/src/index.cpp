#include <algorithm>

#include "tm2qbf/formula.hpp"

namespace tm2qbf {

std::string to_decimal(Index v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<Index> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  constexpr Index kMax = ~Index{0};
  Index v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    auto d = static_cast<unsigned>(c - '0');
    if (v > (kMax - d) / 10) return std::nullopt;
    v = v * 10 + d;
  }
  return v;
}

std::size_t decimal_digits(Index v) {
  std::size_t d = 1;
  while (v >= 10) {
    v /= 10;
    ++d;
  }
  return d;
}

std::string to_string(const VarId& v) {
  return std::string(1, v.kind) + to_decimal(v.group) + "," + std::to_string(v.bit);
}

}  // namespace tm2qbf
