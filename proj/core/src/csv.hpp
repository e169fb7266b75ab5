#pragma once

#include <charconv>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "rsde/errors.hpp"

namespace rsde::csv {

inline std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view text, std::size_t line_no) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("line " + std::to_string(line_no) + ": malformed number '" +
                    std::string(text) + "'");
  }
  return v;
}

/// Reads all rows after a header that must equal `expected`. Each row must
/// have `expected.size()` numeric fields.
inline std::vector<std::vector<double>> read_table(std::istream& is,
                                                   const std::vector<std::string_view>& expected) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty CSV input");
  const auto header = split(trim(line));
  bool ok = header.size() == expected.size();
  for (std::size_t i = 0; ok && i < header.size(); ++i) ok = trim(header[i]) == expected[i];
  if (!ok) throw DataError("unexpected CSV header '" + std::string(trim(line)) + "'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line));
    if (fields.size() != expected.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto f : fields) row.push_back(parse_double(f, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rsde::csv
