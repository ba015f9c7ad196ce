#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <string_view>
#include <vector>

namespace asmxlate {

/// Edit distance over any random-access sequences with equality-comparable
/// elements. O(|a|*|b|) time, one row of O(min(|a|,|b|)) memory.
template <class SeqA, class SeqB>
std::size_t levenshtein(const SeqA& a_in, const SeqB& b_in) {
  const auto* a = &a_in;
  const auto* b = &b_in;
  std::size_t n = std::size(a_in), m = std::size(b_in);
  bool swapped = false;
  if (m > n) {
    swapped = true;
    std::swap(n, m);
  }
  // `row` is indexed along the shorter sequence
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  const auto at_long = [&](std::size_t i) -> decltype(auto) {
    return swapped ? (*b)[i] : (*a)[i];
  };
  const auto at_short = [&](std::size_t j) -> decltype(auto) {
    return swapped ? (*a)[j] : (*b)[j];
  };
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (at_long(i - 1) == at_short(j - 1) ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[m];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein<std::string_view, std::string_view>(a, b);
}

/// Lines without their terminators; a trailing newline adds no empty line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

/// Edit distance counting whole-line insertions, deletions and substitutions.
inline std::size_t line_levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(split_lines(a), split_lines(b));
}

}  // namespace asmxlate
