#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "absq/bench.hpp"
#include "absq/counting.hpp"

using absq::Algorithm;
using absq::BenchEntry;
using absq::BenchReport;
using absq::Count;
using absq::Params;

namespace {

// A report with operation counts following an exact power law, so the fitted
// exponents are known in advance.
BenchReport synthetic_report(const std::string& algorithm, double exp_d, double exp_n) {
  BenchReport report;
  report.metadata.timestamp = "2000-01-01T00:00:00Z";
  report.metadata.backend = "synthetic";
  report.metadata.repetitions = 1;
  for (unsigned long d : {2ul, 4ul, 8ul, 16ul, 32ul})
    for (std::size_t n : {2ul, 4ul, 8ul, 16ul}) {
      BenchEntry e;
      e.d = d;
      e.n = n;
      e.algorithm = algorithm;
      e.mac_count = static_cast<std::uint64_t>(
          std::llround(3.0 * std::pow(double(d), exp_d) * std::pow(double(n), exp_n)));
      e.wall_seconds = 1e-6;
      report.entries.push_back(e);
    }
  return report;
}

}  // namespace

TEST_CASE("grid entries carry the instrumented operation counts") {
  const auto report = absq::run_grid({Count(3), Count(6)}, {2, 5}, {"fast", "richmond"}, 2);
  REQUIRE(report.entries.size() == 8);
  REQUIRE(report.metadata.repetitions == 2);
  REQUIRE(report.metadata.backend.rfind("GMP ", 0) == 0);
  REQUIRE(report.metadata.timestamp.size() == 20);
  REQUIRE(report.metadata.timestamp.back() == 'Z');
  for (const BenchEntry& e : report.entries) {
    const Params p{e.d, e.n};
    const Algorithm which = absq::parse_algorithm(e.algorithm);
    REQUIRE(e.mac_count == absq::mac_count(p, which));
    REQUIRE(e.value.has_value());
    REQUIRE(Count(*e.value) == absq::count(p, which));
    REQUIRE_FALSE(e.log_value.has_value());
    REQUIRE(e.wall_seconds >= 0.0);
    REQUIRE(std::isfinite(e.wall_seconds));
  }
  // deterministic d-major, n-next, algorithm-last order
  REQUIRE(report.entries[0].d == 3);
  REQUIRE(report.entries[0].n == 2);
  REQUIRE(report.entries[0].algorithm == "fast");
  REQUIRE(report.entries[1].algorithm == "richmond");
  REQUIRE(report.entries[2].n == 5);
  REQUIRE(report.entries[4].d == 6);
}

TEST_CASE("enumeration and log algorithms fill the right fields") {
  const auto report = absq::run_grid({Count(3)}, {3}, {"brute", "signature", "anagram", "log-fast"}, 1);
  REQUIRE(report.entries.size() == 4);
  for (const BenchEntry& e : report.entries) {
    if (e.algorithm == "log-fast") {
      REQUIRE_FALSE(e.value.has_value());
      REQUIRE(e.log_value.has_value());
      REQUIRE(*e.log_value == Catch::Approx(std::log(93.0)).epsilon(1e-9));
      REQUIRE(e.mac_count == absq::mac_count({e.d, e.n}, Algorithm::Fast));
    } else {
      REQUIRE(e.value == "93");
      REQUIRE(e.mac_count == 0);
      REQUIRE_FALSE(e.log_value.has_value());
    }
  }
}

TEST_CASE("grid runs propagate infeasibility and reject bad input") {
  REQUIRE_THROWS_AS(absq::run_grid({Count(10)}, {8}, {"brute"}, 1), absq::InfeasibleError);
  REQUIRE_THROWS_AS(absq::run_grid({Count(2)}, {20}, {"anagram"}, 1, 1000), absq::InfeasibleError);
  REQUIRE_THROWS_AS(absq::run_grid({}, {2}, {"fast"}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(absq::run_grid({Count(2)}, {}, {"fast"}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(absq::run_grid({Count(2)}, {2}, {}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(absq::run_grid({Count(2)}, {2}, {"fast"}, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(absq::run_grid({Count(0)}, {2}, {"fast"}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(absq::run_grid({Count(2)}, {2}, {"warp"}, 1), std::invalid_argument);
}

TEST_CASE("parallel runs produce the same counts and values as serial") {
  const auto serial = absq::run_grid({Count(4), Count(9)}, {3, 6}, {"fast", "richmond"}, 1,
                                     absq::default_enumeration_budget, false);
  const auto parallel = absq::run_grid({Count(4), Count(9)}, {3, 6}, {"fast", "richmond"}, 1,
                                       absq::default_enumeration_budget, true);
  REQUIRE(serial.entries.size() == parallel.entries.size());
  for (std::size_t i = 0; i < serial.entries.size(); ++i) {
    REQUIRE(serial.entries[i].d == parallel.entries[i].d);
    REQUIRE(serial.entries[i].n == parallel.entries[i].n);
    REQUIRE(serial.entries[i].algorithm == parallel.entries[i].algorithm);
    REQUIRE(serial.entries[i].mac_count == parallel.entries[i].mac_count);
    REQUIRE(serial.entries[i].value == parallel.entries[i].value);
  }
}

TEST_CASE("fit recovers exponents from an exact power law") {
  SECTION("both variables vary") {
    const auto fit = absq::fit_scaling(synthetic_report("toy", 2.0, 3.0), "toy");
    REQUIRE(fit.slope_d.has_value());
    REQUIRE(fit.slope_n.has_value());
    REQUIRE(*fit.slope_d == Catch::Approx(2.0).margin(1e-6));
    REQUIRE(*fit.slope_n == Catch::Approx(3.0).margin(1e-6));
    REQUIRE(fit.residual_rms < 1e-6);
  }
  SECTION("flat in d") {
    const auto fit = absq::fit_scaling(synthetic_report("toy", 0.0, 2.0), "toy");
    REQUIRE(*fit.slope_d == Catch::Approx(0.0).margin(1e-6));
    REQUIRE(*fit.slope_n == Catch::Approx(2.0).margin(1e-6));
  }
}

TEST_CASE("fit on measured grids matches the known complexity") {
  SECTION("richmond is linear in d") {
    const auto report = absq::run_grid({Count(16), Count(64), Count(256), Count(1024)}, {8},
                                       {"richmond"}, 1);
    const auto fit = absq::fit_scaling(report, "richmond");
    REQUIRE(fit.slope_d.has_value());
    REQUIRE_FALSE(fit.slope_n.has_value());
    REQUIRE(std::abs(*fit.slope_d - 1.0) <= 0.1);
  }
  SECTION("fast is flat in d beyond n") {
    const auto report = absq::run_grid({Count(16), Count(64), Count(256), Count(1024)}, {8},
                                       {"fast"}, 1);
    const auto fit = absq::fit_scaling(report, "fast");
    REQUIRE(std::abs(*fit.slope_d - 0.0) <= 0.05);
    REQUIRE(fit.residual_rms < 1e-9);
  }
  SECTION("fast is roughly cubic in n once d exceeds n") {
    std::vector<std::size_t> lengths;
    for (std::size_t n = 8; n <= 40; n += 4) lengths.push_back(n);
    const auto report = absq::run_grid({Count(1024)}, lengths, {"fast"}, 1);
    const auto fit = absq::fit_scaling(report, "fast");
    REQUIRE_FALSE(fit.slope_d.has_value());
    REQUIRE(*fit.slope_n > 2.6);
    REQUIRE(*fit.slope_n < 3.1);
  }
}

TEST_CASE("fit rejects unusable inputs") {
  const auto small = absq::run_grid({Count(2)}, {3, 4, 5}, {"fast"}, 1);
  REQUIRE_THROWS_AS(absq::fit_scaling(small, "fast"), absq::FitError);       // 3 entries
  REQUIRE_THROWS_AS(absq::fit_scaling(small, "richmond"), absq::FitError);   // none at all
  const auto fixed = absq::run_grid({Count(5)}, {6}, {"fast"}, 1);
  REQUIRE_THROWS_AS(absq::fit_scaling(fixed, "fast"), absq::FitError);       // nothing varies
  // every operation count is zero on a d = 1 grid, so nothing usable remains
  const auto flat = absq::run_grid({Count(1)}, {1, 2, 3, 4, 5}, {"fast"}, 1);
  REQUIRE_THROWS_AS(absq::fit_scaling(flat, "fast"), absq::FitError);
}

TEST_CASE("reports round-trip through JSON exactly") {
  auto report = absq::run_grid({Count(3), Count(1000)}, {0, 4}, {"fast", "richmond", "log-fast"}, 2);
  // throw in an astronomically large alphabet to exercise the string encoding
  BenchEntry wide;
  wide.d = Count(1) << 200;
  wide.n = 2;
  wide.algorithm = "fast";
  wide.mac_count = 2;
  wide.wall_seconds = 3.141592653589793e-05;
  wide.value = Count(2 * (Count(1) << 400) - (Count(1) << 200)).get_str();
  report.entries.push_back(wide);

  const std::string text = absq::emit_report(report);
  const BenchReport back = absq::parse_report(text);
  REQUIRE(back == report);
  REQUIRE(absq::parse_report(absq::emit_report(back)) == back);

  const auto doc = nlohmann::json::parse(text);
  REQUIRE(doc.at("metadata").at("backend").get<std::string>().rfind("GMP ", 0) == 0);
  REQUIRE(doc.at("entries").size() == report.entries.size());
  REQUIRE(doc.at("entries").back().at("d").get<std::string>() == Count(Count(1) << 200).get_str());
}
