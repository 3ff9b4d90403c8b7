#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace perfrepair::repair {

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

struct Edit {
  char op;  // ' ', '-', '+'
  std::size_t a, b;  // line indexes in old/new (the one not used is ignored)
};

// LCS edit script; programs are small, so the quadratic table is fine.
inline std::vector<Edit> edit_script(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Edit> out;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      out.push_back({' ', i++, j++});
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      out.push_back({'-', i++, j});
    } else {
      out.push_back({'+', i, j++});
    }
  }
  return out;
}

}  // namespace detail

/// Unified diff with `context` lines around each change. Empty when the
/// texts are equal.
inline std::string unified_diff(std::string_view before, std::string_view after,
                                const std::string& from = "original", const std::string& to = "patched",
                                std::size_t context = 3) {
  const auto a = detail::split_lines(before);
  const auto b = detail::split_lines(after);
  const auto script = detail::edit_script(a, b);
  std::vector<std::size_t> changed;
  for (std::size_t k = 0; k < script.size(); ++k)
    if (script[k].op != ' ') changed.push_back(k);
  if (changed.empty()) return {};

  std::ostringstream os;
  os << "--- " << from << "\n+++ " << to << "\n";
  std::size_t c = 0;
  while (c < changed.size()) {
    const std::size_t lo = changed[c] >= context ? changed[c] - context : 0;
    std::size_t hi = changed[c];
    // extend the hunk while the next change is within 2*context lines
    while (c + 1 < changed.size() && changed[c + 1] <= hi + 2 * context + 1) hi = changed[++c];
    hi = std::min(script.size() - 1, hi + context);
    ++c;
    std::size_t old_start = 0, new_start = 0, old_len = 0, new_len = 0;
    bool first = true;
    for (std::size_t k = lo; k <= hi; ++k) {
      const auto& e = script[k];
      if (first) {
        old_start = e.a + 1;
        new_start = e.b + 1;
        first = false;
      }
      if (e.op != '+') ++old_len;
      if (e.op != '-') ++new_len;
    }
    // empty ranges point at the line before, as in GNU diff
    if (old_len == 0) --old_start;
    if (new_len == 0) --new_start;
    os << "@@ -" << old_start << ',' << old_len << " +" << new_start << ',' << new_len << " @@\n";
    for (std::size_t k = lo; k <= hi; ++k) {
      const auto& e = script[k];
      os << e.op << (e.op == '+' ? b[e.b] : a[e.a]) << '\n';
    }
  }
  return os.str();
}

}  // namespace perfrepair::repair
