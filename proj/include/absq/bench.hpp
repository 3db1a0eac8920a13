#pragma once

// Benchmark grid runner. Each grid point records the algorithm's exact
// multiply-accumulate count next to its wall time, so scaling claims can be
// read off the deterministic operation counts and merely corroborated by
// timing. Reports serialize to JSON and round-trip losslessly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "absq/counting.hpp"
#include "absq/log_eval.hpp"

namespace absq {

struct BenchEntry {
  Count d;
  std::size_t n = 0;
  std::string algorithm;
  std::uint64_t mac_count = 0;          // 0 for enumeration algorithms
  double wall_seconds = 0.0;            // minimum over repetitions
  std::optional<std::string> value;     // exact decimal (exact algorithms)
  std::optional<double> log_value;      // natural log (log-fast)

  bool operator==(const BenchEntry& other) const {
    return d == other.d && n == other.n && algorithm == other.algorithm &&
           mac_count == other.mac_count && wall_seconds == other.wall_seconds &&
           value == other.value && log_value == other.log_value;
  }
};

struct BenchMetadata {
  std::string timestamp;  // UTC, ISO 8601
  std::string backend;
  unsigned repetitions = 1;

  bool operator==(const BenchMetadata& other) const {
    return timestamp == other.timestamp && backend == other.backend &&
           repetitions == other.repetitions;
  }
};

struct BenchReport {
  BenchMetadata metadata;
  std::vector<BenchEntry> entries;

  bool operator==(const BenchReport& other) const {
    return metadata == other.metadata && entries == other.entries;
  }
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empirical scaling exponents of the operation count, from an ordinary
// least-squares fit of log(macs) against log(d) and/or log(n); a slope is
// only reported for a variable that actually varies across the entries.
struct ScalingFit {
  std::optional<double> slope_d;
  std::optional<double> slope_n;
  double residual_rms = 0.0;
};

namespace detail {

inline std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char text[32];
  std::strftime(text, sizeof text, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return text;
}

inline std::string backend_description() { return std::string("GMP ") + gmp_version; }

inline BenchEntry run_point(const Count& d, std::size_t n, const std::string& algorithm,
                            unsigned repetitions, std::uint64_t budget) {
  BenchEntry entry;
  entry.d = d;
  entry.n = n;
  entry.algorithm = algorithm;
  const Params p{d, n};
  using clock = std::chrono::steady_clock;
  double best = std::numeric_limits<double>::infinity();
  if (algorithm == "log-fast") {
    double log_value = 0.0;
    for (unsigned rep = 0; rep < repetitions; ++rep) {
      std::uint64_t terms = 0;
      const auto start = clock::now();
      log_value = log_count_fast(p, &terms);
      best = std::min(best, std::chrono::duration<double>(clock::now() - start).count());
      entry.mac_count = terms;
    }
    entry.log_value = log_value;
  } else {
    const Algorithm which = parse_algorithm(algorithm);
    const bool instrumented = which == Algorithm::Fast || which == Algorithm::Richmond;
    Count value;
    for (unsigned rep = 0; rep < repetitions; ++rep) {
      std::uint64_t macs = 0;
      const auto start = clock::now();
      switch (which) {
        case Algorithm::Auto:
        case Algorithm::Fast: value = count_fast(p, &macs); break;
        case Algorithm::Richmond: value = count_richmond(p, &macs); break;
        default: value = count(p, which, budget); break;
      }
      best = std::min(best, std::chrono::duration<double>(clock::now() - start).count());
      if (instrumented || which == Algorithm::Auto) entry.mac_count = macs;
    }
    entry.value = value.get_str();
  }
  entry.wall_seconds = best;
  return entry;
}

}  // namespace detail

// Run every (d, n, algorithm) combination, timing each repetitions times and
// keeping the fastest repetition. Entries appear in deterministic d-major,
// n-next, algorithm-last order regardless of the parallel flag, and the
// operation counts are identical either way; only wall times may differ.
inline BenchReport run_grid(const std::vector<Count>& d_values,
                            const std::vector<std::size_t>& n_values,
                            const std::vector<std::string>& algorithms, unsigned repetitions = 5,
                            std::uint64_t budget = default_enumeration_budget,
                            bool parallel = false) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  if (d_values.empty() || n_values.empty() || algorithms.empty())
    throw std::invalid_argument("benchmark grid must not be empty");
  for (const Count& d : d_values)
    if (d < 1) throw std::invalid_argument("benchmark alphabets must be positive");

  BenchReport report;
  report.metadata.timestamp = detail::iso8601_utc_now();
  report.metadata.backend = detail::backend_description();
  report.metadata.repetitions = repetitions;

  if (!parallel) {
    for (const Count& d : d_values)
      for (std::size_t n : n_values)
        for (const std::string& algorithm : algorithms)
          report.entries.push_back(detail::run_point(d, n, algorithm, repetitions, budget));
    return report;
  }
  std::vector<std::future<BenchEntry>> pending;
  for (const Count& d : d_values)
    for (std::size_t n : n_values)
      for (const std::string& algorithm : algorithms)
        pending.push_back(std::async(std::launch::async, [d, n, algorithm, repetitions, budget] {
          return detail::run_point(d, n, algorithm, repetitions, budget);
        }));
  for (auto& f : pending) report.entries.push_back(f.get());
  return report;
}

// Least-squares exponents for one algorithm's entries. Entries whose
// operation count is zero (or whose n is zero while n varies) carry no
// information in log space and are left out; at least four must remain.
inline ScalingFit fit_scaling(const BenchReport& report, const std::string& algorithm) {
  std::vector<const BenchEntry*> all;
  for (const BenchEntry& e : report.entries)
    if (e.algorithm == algorithm) all.push_back(&e);
  if (all.size() < 4)
    throw FitError("need at least 4 entries for '" + algorithm + "', have " +
                   std::to_string(all.size()));

  std::vector<Count> distinct_d;
  std::vector<std::size_t> distinct_n;
  for (const BenchEntry* e : all) {
    if (std::find(distinct_d.begin(), distinct_d.end(), e->d) == distinct_d.end())
      distinct_d.push_back(e->d);
    if (std::find(distinct_n.begin(), distinct_n.end(), e->n) == distinct_n.end())
      distinct_n.push_back(e->n);
  }
  const bool vary_d = distinct_d.size() > 1;
  const bool vary_n = distinct_n.size() > 1;
  if (!vary_d && !vary_n) throw FitError("grid holds both d and n fixed; nothing to fit");

  std::vector<std::vector<double>> rows;  // regressors per usable entry
  std::vector<double> response;
  for (const BenchEntry* e : all) {
    if (e->mac_count == 0) continue;
    if (vary_n && e->n == 0) continue;
    std::vector<double> row;
    if (vary_d) row.push_back(log_of(e->d));
    if (vary_n) row.push_back(std::log(static_cast<double>(e->n)));
    row.push_back(1.0);
    rows.push_back(std::move(row));
    response.push_back(std::log(static_cast<double>(e->mac_count)));
  }
  if (rows.size() < 4)
    throw FitError("fewer than 4 usable entries for '" + algorithm + "' after dropping zeros");

  // normal equations, solved by Gaussian elimination with partial pivoting
  const std::size_t unknowns = rows.front().size();
  std::vector<std::vector<double>> ata(unknowns, std::vector<double>(unknowns, 0.0));
  std::vector<double> atb(unknowns, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < unknowns; ++i) {
      for (std::size_t j = 0; j < unknowns; ++j) ata[i][j] += rows[r][i] * rows[r][j];
      atb[i] += rows[r][i] * response[r];
    }
  for (std::size_t col = 0; col < unknowns; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < unknowns; ++r)
      if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
    if (std::abs(ata[pivot][col]) < 1e-12)
      throw FitError("degenerate grid for '" + algorithm + "': regressors are collinear");
    std::swap(ata[col], ata[pivot]);
    std::swap(atb[col], atb[pivot]);
    for (std::size_t r = 0; r < unknowns; ++r) {
      if (r == col) continue;
      const double factor = ata[r][col] / ata[col][col];
      for (std::size_t j = 0; j < unknowns; ++j) ata[r][j] -= factor * ata[col][j];
      atb[r] -= factor * atb[col];
    }
  }
  std::vector<double> solution(unknowns);
  for (std::size_t i = 0; i < unknowns; ++i) solution[i] = atb[i] / ata[i][i];

  ScalingFit fit;
  std::size_t index = 0;
  if (vary_d) fit.slope_d = solution[index++];
  if (vary_n) fit.slope_n = solution[index++];
  double squares = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double predicted = 0.0;
    for (std::size_t j = 0; j < unknowns; ++j) predicted += rows[r][j] * solution[j];
    const double gap = response[r] - predicted;
    squares += gap * gap;
  }
  fit.residual_rms = std::sqrt(squares / static_cast<double>(rows.size()));
  return fit;
}

inline nlohmann::ordered_json report_to_json(const BenchReport& report) {
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"timestamp", report.metadata.timestamp},
                     {"backend", report.metadata.backend},
                     {"repetitions", report.metadata.repetitions}};
  doc["entries"] = nlohmann::ordered_json::array();
  for (const BenchEntry& e : report.entries) {
    nlohmann::ordered_json row;
    row["d"] = e.d.get_str();
    row["n"] = e.n;
    row["algorithm"] = e.algorithm;
    row["mac_count"] = e.mac_count;
    row["wall_seconds"] = e.wall_seconds;
    if (e.value)
      row["value"] = *e.value;
    else
      row["value"] = nullptr;
    if (e.log_value)
      row["log_value"] = *e.log_value;
    else
      row["log_value"] = nullptr;
    doc["entries"].push_back(std::move(row));
  }
  return doc;
}

inline std::string emit_report(const BenchReport& report) { return report_to_json(report).dump(2); }

inline BenchReport report_from_json(const nlohmann::json& doc) {
  BenchReport report;
  report.metadata.timestamp = doc.at("metadata").at("timestamp").get<std::string>();
  report.metadata.backend = doc.at("metadata").at("backend").get<std::string>();
  report.metadata.repetitions = doc.at("metadata").at("repetitions").get<unsigned>();
  for (const auto& row : doc.at("entries")) {
    BenchEntry e;
    e.d = Count(row.at("d").get<std::string>());
    e.n = row.at("n").get<std::size_t>();
    e.algorithm = row.at("algorithm").get<std::string>();
    e.mac_count = row.at("mac_count").get<std::uint64_t>();
    e.wall_seconds = row.at("wall_seconds").get<double>();
    if (!row.at("value").is_null()) e.value = row.at("value").get<std::string>();
    if (!row.at("log_value").is_null()) e.log_value = row.at("log_value").get<double>();
    report.entries.push_back(std::move(e));
  }
  return report;
}

inline BenchReport parse_report(const std::string& text) {
  return report_from_json(nlohmann::json::parse(text));
}

}  // namespace absq
