#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pmc/core.hpp"

/**
 * @file
 * RFC-4180 style CSV input and output for periodic series.
 *
 * Series files carry a header and either (time_index, value) or
 * (year, season, value) columns; times must be consecutive.
 */
namespace pmc::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses quoted fields ("" escapes a quote), CRLF or LF line ends and
/// line breaks inside quotes. Blank lines are skipped.
[[nodiscard]] inline Table parse(std::istream& in) {
  Table table;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  char c = 0;

  const auto end_record = [&] {
    if (field_started || !field.empty() || !record.empty()) {
      record.push_back(std::move(field));
      if (table.header.empty()) {
        table.header = std::move(record);
      } else {
        if (record.size() != table.header.size()) {
          fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected " +
                                          std::to_string(table.header.size()) + " fields, found " +
                                          std::to_string(record.size()));
        }
        table.rows.push_back(std::move(record));
      }
    }
    record.clear();
    field.clear();
    field_started = false;
  };

  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": stray quote");
        quoted = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (quoted) fail(ErrorCode::ParseError, "unterminated quoted field");
  end_record();
  if (table.header.empty()) fail(ErrorCode::ParseError, "empty CSV input (a header row is required)");
  return table;
}

[[nodiscard]] inline Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  return parse(in);
}

[[nodiscard]] inline double to_double(std::string_view text, std::size_t row) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

[[nodiscard]] inline long to_long(std::string_view text, std::size_t row) {
  const double v = to_double(text, row);
  if (v != static_cast<double>(static_cast<long>(v))) {
    fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": '" + std::string(text) + "' is not an integer");
  }
  return static_cast<long>(v);
}

/// Series from a parsed table (two or three columns, see file comment).
[[nodiscard]] inline PeriodicSeries to_series(const Table& table, int period) {
  require(period >= 1, ErrorCode::InvalidArgument, "period must be >= 1");
  const std::size_t cols = table.header.size();
  if (cols != 2 && cols != 3) {
    fail(ErrorCode::ParseError, "expected 2 columns (time_index, value) or 3 (year, season, value), found " +
                                    std::to_string(cols));
  }
  std::vector<double> values;
  values.reserve(table.rows.size());
  long origin = 1;
  long expected = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    long t = 0;
    if (cols == 2) {
      t = to_long(row[0], r + 1);
    } else {
      const long year = to_long(row[0], r + 1);
      const long season = to_long(row[1], r + 1);
      if (season < 1 || season > period) {
        fail(ErrorCode::ParseError, "row " + std::to_string(r + 1) + ": season " + std::to_string(season) +
                                        " outside [1," + std::to_string(period) + "]");
      }
      t = (year - 1) * period + season;
    }
    if (r == 0) {
      origin = t;
    } else if (t != expected) {
      fail(ErrorCode::ParseError, "row " + std::to_string(r + 1) + ": time stamps must be consecutive");
    }
    expected = t + 1;
    values.push_back(to_double(row[cols - 1], r + 1));
  }
  return {std::move(values), period, origin};
}

[[nodiscard]] inline PeriodicSeries read_series(const std::string& path, int period) {
  return to_series(read_file(path), period);
}

/// Shortest text that reads back to the same double.
[[nodiscard]] inline std::string exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

/// Six significant digits, for human-readable output.
[[nodiscard]] inline std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

[[nodiscard]] inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << quote(fields[i]);
    }
    out_ << '\n';
    return *this;
  }

 private:
  std::ostream& out_;
};

/// Writes `content` to `path`, failing with IoError.
inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

/// (year, season, value) with full precision.
[[nodiscard]] inline std::string series_csv(const PeriodicSeries& x) {
  std::ostringstream os;
  Writer w(os);
  w.row({"year", "season", "value"});
  for (std::size_t i = 0; i < x.size(); ++i) {
    const SeasonIndex idx = SeasonIndex::from_time(x.time_at(i), x.period());
    w.row({std::to_string(idx.year), std::to_string(idx.season), exact(x[i])});
  }
  return os.str();
}

}  // namespace pmc::csv
