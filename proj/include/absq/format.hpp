#pragma once

// Output records and the plain/CSV/JSON renderings shared by the command-line
// tool. Exact counts travel as full decimal strings; doubles are printed with
// shortest-round-trip precision so parsing an emitted file reproduces the
// values bit for bit.

#include <charconv>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "absq/counting.hpp"

namespace absq {

// One row of machine-readable output, the same shape for every subcommand.
struct OutputRecord {
  std::string d;
  std::size_t n = 0;
  std::string algorithm;
  std::optional<std::string> value;           // exact decimal integer, or a rendered sample
  std::optional<double> log_value;
  std::optional<double> elapsed_seconds;

  bool operator==(const OutputRecord& other) const {
    return d == other.d && n == other.n && algorithm == other.algorithm &&
           value == other.value && log_value == other.log_value &&
           elapsed_seconds == other.elapsed_seconds;
  }
};

inline constexpr const char* csv_header = "d,n,algorithm,value,log_value,elapsed_seconds";

// Shortest decimal text that parses back to exactly this double.
inline std::string format_double(double v) {
  char text[64];
  const auto out = std::to_chars(text, text + sizeof text, v);
  return std::string(text, out.ptr);
}

namespace detail {

// Quote a CSV field only when it needs it (commas or quotes inside).
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace detail

inline std::string to_csv_row(const OutputRecord& r) {
  std::string row = r.d;
  row += ',';
  row += std::to_string(r.n);
  row += ',';
  row += r.algorithm;
  row += ',';
  if (r.value) row += detail::csv_escape(*r.value);
  row += ',';
  if (r.log_value) row += format_double(*r.log_value);
  row += ',';
  if (r.elapsed_seconds) row += format_double(*r.elapsed_seconds);
  return row;
}

inline std::string to_csv(const std::vector<OutputRecord>& records) {
  std::string text = csv_header;
  text += '\n';
  for (const OutputRecord& r : records) {
    text += to_csv_row(r);
    text += '\n';
  }
  return text;
}

inline nlohmann::ordered_json record_to_json(const OutputRecord& r) {
  nlohmann::ordered_json row;
  row["d"] = r.d;
  row["n"] = r.n;
  row["algorithm"] = r.algorithm;
  if (r.value)
    row["value"] = *r.value;
  else
    row["value"] = nullptr;
  if (r.log_value)
    row["log_value"] = *r.log_value;
  else
    row["log_value"] = nullptr;
  if (r.elapsed_seconds)
    row["elapsed_seconds"] = *r.elapsed_seconds;
  else
    row["elapsed_seconds"] = nullptr;
  return row;
}

inline std::string to_json(const std::vector<OutputRecord>& records) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const OutputRecord& r : records) doc.push_back(record_to_json(r));
  return doc.dump(2);
}

namespace detail {

// Split one CSV line, honoring double-quoted fields with doubled quotes.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

inline double parse_double_field(std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw std::invalid_argument("bad numeric field: " + std::string(field));
  return v;
}

}  // namespace detail

inline std::vector<OutputRecord> parse_csv(const std::string& text) {
  std::vector<OutputRecord> records;
  std::size_t start = 0;
  bool saw_header = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != csv_header) throw std::invalid_argument("unrecognized CSV header");
      saw_header = true;
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 6) throw std::invalid_argument("CSV row must have 6 fields");
    OutputRecord r;
    r.d = fields[0];
    std::size_t n = 0;
    const auto res = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), n);
    if (res.ec != std::errc() || res.ptr != fields[1].data() + fields[1].size())
      throw std::invalid_argument("bad n field: " + std::string(fields[1]));
    r.n = n;
    r.algorithm = std::string(fields[2]);
    if (!fields[3].empty()) r.value = std::string(fields[3]);
    if (!fields[4].empty()) r.log_value = detail::parse_double_field(fields[4]);
    if (!fields[5].empty()) r.elapsed_seconds = detail::parse_double_field(fields[5]);
    records.push_back(std::move(r));
  }
  if (!saw_header) throw std::invalid_argument("empty CSV input");
  return records;
}

inline std::vector<OutputRecord> parse_json_records(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("expected a JSON array of records");
  std::vector<OutputRecord> records;
  for (const auto& row : doc) {
    OutputRecord r;
    r.d = row.at("d").get<std::string>();
    r.n = row.at("n").get<std::size_t>();
    r.algorithm = row.at("algorithm").get<std::string>();
    if (!row.at("value").is_null()) r.value = row.at("value").get<std::string>();
    if (!row.at("log_value").is_null()) r.log_value = row.at("log_value").get<double>();
    if (!row.at("elapsed_seconds").is_null())
      r.elapsed_seconds = row.at("elapsed_seconds").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

// Words print as base-36 digit strings while every symbol has a digit, and
// as comma-separated decimal symbols beyond that.
inline std::string render_word(const std::vector<Count>& word, const Count& alphabet) {
  static const char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string text;
  if (alphabet <= 36) {
    if (word.empty()) return "-";
    for (const Count& symbol : word) text += digits[symbol.get_ui()];
    return text;
  }
  if (word.empty()) return "-";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) text += ',';
    text += word[i].get_str();
  }
  return text;
}

}  // namespace absq
