// absq: count, tabulate, log-evaluate, sample, and benchmark abelian squares.
//
// Exit status: 0 on success, 2 on malformed usage or arguments, 3 when the
// requested computation is infeasible at this scale (enumeration budgets,
// recursions with more levels than addressable work).

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absq/bench.hpp"
#include "absq/counting.hpp"
#include "absq/format.hpp"
#include "absq/log_eval.hpp"
#include "absq/sampler.hpp"

namespace {

using absq::Count;
using absq::OutputRecord;
using absq::Params;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Count parse_alphabet(const std::string& text) {
  try {
    return Count(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not an integer alphabet size: " + text);
  }
}

void emit(const std::vector<OutputRecord>& records, const std::string& format,
          const std::vector<std::string>& plain_lines) {
  if (format == "plain") {
    for (const std::string& line : plain_lines) std::cout << line << '\n';
  } else if (format == "csv") {
    std::cout << absq::to_csv(records);
  } else {
    std::cout << absq::to_json(records) << '\n';
  }
}

int run_count(const std::string& d_text, std::size_t n, const std::string& algorithm,
              const std::string& format, std::uint64_t budget) {
  const Count d = parse_alphabet(d_text);
  absq::Algorithm which = absq::parse_algorithm(algorithm);
  if (which == absq::Algorithm::Auto) which = absq::Algorithm::Fast;
  const Timer timer;
  const Count value = absq::count({d, n}, which, budget);
  const double elapsed = timer.seconds();
  OutputRecord record;
  record.d = d.get_str();
  record.n = n;
  record.algorithm = absq::algorithm_name(which);
  record.value = value.get_str();
  record.elapsed_seconds = elapsed;
  emit({record}, format, {value.get_str()});
  return 0;
}

int run_table(std::size_t d_max, std::size_t n_max, const std::string& format) {
  const auto table = absq::count_table(d_max, n_max);
  std::vector<OutputRecord> records;
  std::vector<std::string> lines;
  for (std::size_t d = 1; d <= d_max; ++d) {
    std::string line;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const std::string value = table[d - 1][n].get_str();
      OutputRecord record;
      record.d = std::to_string(d);
      record.n = n;
      record.algorithm = "richmond";
      record.value = value;
      records.push_back(std::move(record));
      if (n > 0) line += ' ';
      line += value;
    }
    lines.push_back(std::move(line));
  }
  emit(records, format, lines);
  return 0;
}

int run_curve(const std::vector<std::string>& d_texts, std::size_t n_max,
              const std::string& format) {
  std::vector<Count> d_list;
  if (d_texts.empty()) {
    d_list = absq::curve_preset_alphabets();
  } else {
    for (const std::string& text : d_texts) d_list.push_back(parse_alphabet(text));
  }
  const auto matrix = absq::curve(d_list, n_max);
  std::vector<OutputRecord> records;
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    const std::string d_str = d_list[i].get_str();
    for (std::size_t n = 0; n <= n_max; ++n) {
      OutputRecord record;
      record.d = d_str;
      record.n = n;
      record.algorithm = "log-fast";
      record.log_value = matrix[i][n];
      records.push_back(std::move(record));
      lines.push_back(d_str + " " + std::to_string(n) + " " + absq::format_double(matrix[i][n]));
    }
  }
  emit(records, format, lines);
  return 0;
}

int run_sample(const std::string& d_text, std::size_t n, std::size_t how_many,
               std::uint64_t seed, const std::string& format) {
  const Count d = parse_alphabet(d_text);
  const Params p{d, n};
  absq::SampleRng rng(seed);
  std::vector<OutputRecord> records;
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < how_many; ++i) {
    const absq::SampleResult sample = absq::sample_abelian_square(p, rng);
    const std::string rendered =
        absq::render_word(sample.pair.x, d) + " " + absq::render_word(sample.pair.y, d);
    OutputRecord record;
    record.d = d.get_str();
    record.n = n;
    record.algorithm = "sample";
    record.value = rendered;
    records.push_back(std::move(record));
    lines.push_back(rendered);
  }
  emit(records, format, lines);
  return 0;
}

int run_bench(const std::vector<std::string>& d_texts, const std::vector<std::size_t>& n_values,
              const std::vector<std::string>& algorithms, unsigned repetitions, bool parallel,
              std::uint64_t budget, const std::string& format) {
  std::vector<Count> d_values;
  for (const std::string& text : d_texts) d_values.push_back(parse_alphabet(text));
  const absq::BenchReport report =
      absq::run_grid(d_values, n_values, algorithms, repetitions, budget, parallel);
  if (format == "json") {
    std::cout << absq::emit_report(report) << '\n';
    return 0;
  }
  if (format == "csv") {
    std::vector<OutputRecord> records;
    for (const absq::BenchEntry& e : report.entries) {
      OutputRecord record;
      record.d = e.d.get_str();
      record.n = e.n;
      record.algorithm = e.algorithm;
      record.value = e.value;
      record.log_value = e.log_value;
      record.elapsed_seconds = e.wall_seconds;
      records.push_back(std::move(record));
    }
    std::cout << absq::to_csv(records);
    return 0;
  }
  for (const absq::BenchEntry& e : report.entries) {
    std::cout << "d=" << e.d.get_str() << " n=" << e.n << " algorithm=" << e.algorithm
              << " macs=" << e.mac_count << " wall=" << absq::format_double(e.wall_seconds) << "s";
    if (e.value) std::cout << " value=" << *e.value;
    if (e.log_value) std::cout << " log=" << absq::format_double(*e.log_value);
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abelian square counting toolkit"};
  app.require_subcommand(1);
  const auto format_check = CLI::IsMember({"plain", "csv", "json"});

  auto* count_cmd = app.add_subcommand("count", "exact number of abelian squares");
  std::string count_d;
  std::size_t count_n = 0;
  std::string count_algorithm = "fast";
  std::string count_format = "plain";
  std::uint64_t count_budget = absq::default_enumeration_budget;
  count_cmd->add_option("--d", count_d, "alphabet size (any non-negative integer)")->required();
  count_cmd->add_option("--n", count_n, "half-word length")->required();
  count_cmd->add_option("--algorithm", count_algorithm,
                        "auto|fast|richmond|signature|anagram|brute");
  count_cmd->add_option("--format", count_format, "plain|csv|json")->check(format_check);
  count_cmd->add_option("--budget", count_budget, "enumeration object limit");

  auto* table_cmd = app.add_subcommand("table", "exact counts for all d, n up to bounds");
  std::size_t table_d_max = 6;
  std::size_t table_n_max = 7;
  std::string table_format = "plain";
  table_cmd->add_option("--d-max", table_d_max, "largest alphabet size (default 6)");
  table_cmd->add_option("--n-max", table_n_max, "largest half-word length (default 7)");
  table_cmd->add_option("--format", table_format, "plain|csv|json")->check(format_check);

  auto* curve_cmd = app.add_subcommand("curve", "log-domain counts over a grid");
  std::vector<std::string> curve_d;
  std::size_t curve_n_max = absq::curve_preset_n_max;
  std::string curve_format = "plain";
  curve_cmd->add_option("--d-list", curve_d,
                        "alphabet sizes (default: powers of two up to 512)");
  curve_cmd->add_option("--n-max", curve_n_max, "largest half-word length (default 99)");
  curve_cmd->add_option("--format", curve_format, "plain|csv|json")->check(format_check);

  auto* sample_cmd = app.add_subcommand("sample", "uniform random abelian squares");
  std::string sample_d;
  std::size_t sample_n = 0;
  std::size_t sample_count = 1;
  std::uint64_t sample_seed = 0;
  std::string sample_format = "plain";
  sample_cmd->add_option("--d", sample_d, "alphabet size")->required();
  sample_cmd->add_option("--n", sample_n, "half-word length")->required();
  sample_cmd->add_option("--count", sample_count, "how many samples (default 1)");
  sample_cmd->add_option("--seed", sample_seed, "random seed (default 0)");
  sample_cmd->add_option("--format", sample_format, "plain|csv|json")->check(format_check);

  auto* bench_cmd = app.add_subcommand("bench", "operation counts and wall times over a grid");
  std::vector<std::string> bench_d;
  std::vector<std::size_t> bench_n;
  std::vector<std::string> bench_algorithms = {"fast"};
  unsigned bench_repetitions = 5;
  bool bench_parallel = false;
  std::uint64_t bench_budget = absq::default_enumeration_budget;
  std::string bench_format = "plain";
  bench_cmd->add_option("--d-list", bench_d, "alphabet sizes")->required();
  bench_cmd->add_option("--n-list", bench_n, "half-word lengths")->required();
  bench_cmd->add_option("--algorithms", bench_algorithms,
                        "fast|richmond|signature|anagram|brute|log-fast (default fast)");
  bench_cmd->add_option("--repetitions", bench_repetitions, "timing repetitions (default 5)");
  bench_cmd->add_flag("--parallel", bench_parallel, "run grid points concurrently");
  bench_cmd->add_option("--budget", bench_budget, "enumeration object limit");
  bench_cmd->add_option("--format", bench_format, "plain|csv|json")->check(format_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*count_cmd)
      return run_count(count_d, count_n, count_algorithm, count_format, count_budget);
    if (*table_cmd) {
      if (table_d_max < 1) throw std::invalid_argument("--d-max must be at least 1");
      return run_table(table_d_max, table_n_max, table_format);
    }
    if (*curve_cmd) return run_curve(curve_d, curve_n_max, curve_format);
    if (*sample_cmd)
      return run_sample(sample_d, sample_n, sample_count, sample_seed, sample_format);
    if (*bench_cmd)
      return run_bench(bench_d, bench_n, bench_algorithms, bench_repetitions, bench_parallel,
                       bench_budget, bench_format);
  } catch (const absq::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
