#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sqss/core/errors.hpp"
#include "sqss/core/matrix.hpp"

namespace sqss::io {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(std::string_view s) {
  s = trim(s);
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw UsageError("cannot parse '" + std::string(s) + "' as a number");
  return v;
}

// "1,1,1,1" -> {1,1,1,1}. Empty input gives an empty list.
template <typename T>
std::vector<T> parse_list(std::string_view s) {
  std::vector<T> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_value<T>(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// "3" -> {3}; "1..5" -> {1,2,3,4,5}; "1,4" -> {1,4}.
inline std::vector<std::uint64_t> parse_range(std::string_view s) {
  s = trim(s);
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) return parse_list<std::uint64_t>(s);
  const auto lo = parse_value<std::uint64_t>(s.substr(0, dots));
  const auto hi = parse_value<std::uint64_t>(s.substr(dots + 2));
  if (hi < lo) throw UsageError("empty range '" + std::string(s) + "'");
  if (hi - lo > 1'000'000) throw UsageError("range too long '" + std::string(s) + "'");
  std::vector<std::uint64_t> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// Whitespace-separated "re,im" tokens, row-major. The dimension is inferred
// from the token count, which must be a perfect square.
inline Matrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Amplitude> entries;
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') {
      std::getline(in, tok);
      continue;
    }
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw UsageError("matrix entry '" + tok + "' is not re,im");
    entries.emplace_back(parse_value<double>(std::string_view(tok).substr(0, comma)),
                         parse_value<double>(std::string_view(tok).substr(comma + 1)));
  }
  const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (dim == 0 || dim * dim != entries.size())
    throw UsageError("matrix file has " + std::to_string(entries.size()) + " entries, not a square");
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = entries[r * dim + c];
  return m;
}

inline Matrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

}  // namespace sqss::io
