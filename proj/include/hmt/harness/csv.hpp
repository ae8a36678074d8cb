#pragma once

// The flat result table shared by every experiment:
//   experiment,class,method,n,trial,total_distance,max_distance,wall_ms,status
// Missing values are empty cells.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hmt/errors.hpp"

namespace hmt {

inline constexpr const char* kCsvHeader = "experiment,class,method,n,trial,total_distance,max_distance,wall_ms,status";

struct CsvRow {
  std::string experiment;
  std::string cls;
  std::string method;
  int n = 0;
  int trial = 0;
  std::optional<double> total_distance;
  std::optional<double> max_distance;
  std::optional<double> wall_ms;
  std::string status = "ok";
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace detail {

inline std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw SchemaMismatch("csv: bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw SchemaMismatch("csv: bad number '" + s + "'");
  }
}

inline int parse_int_cell(const std::string& s) {
  const auto v = parse_cell(s);
  if (!v) throw SchemaMismatch("csv: missing integer cell");
  return static_cast<int>(*v);
}

}  // namespace detail

inline std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.experiment + "," + r.cls + "," + r.method + "," + std::to_string(r.n) + "," + std::to_string(r.trial) +
           "," + detail::cell(r.total_distance) + "," + detail::cell(r.max_distance) + "," + detail::cell(r.wall_ms) +
           "," + r.status + "\n";
  }
  return out;
}

/// Parses text produced by to_csv. Throws SchemaMismatch on a missing or
/// different header and on malformed rows.
inline std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw SchemaMismatch("csv: unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw SchemaMismatch("csv: expected 9 fields, got " + std::to_string(f.size()));
    CsvRow r;
    r.experiment = f[0];
    r.cls = f[1];
    r.method = f[2];
    r.n = detail::parse_int_cell(f[3]);
    r.trial = detail::parse_int_cell(f[4]);
    r.total_distance = detail::parse_cell(f[5]);
    r.max_distance = detail::parse_cell(f[6]);
    r.wall_ms = detail::parse_cell(f[7]);
    r.status = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace hmt
