#pragma once

// Log-domain evaluation of the abelian-square count, for regimes where the
// exact integer has far more digits than any fixed-width float can carry.
// Same shrinking-band recursion as the exact path, with products turned into
// sums of logs and the outer sums handled by a running-maximum log-sum-exp.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "absq/counting.hpp"

namespace absq {

// ln of an exact positive Count via mantissa/exponent decomposition; accurate
// to a few ulp even when the value itself would overflow a double.
inline double log_of(const Count& value) {
  if (value <= 0) throw std::domain_error("log_of needs a positive value");
  if (value == 1) return 0.0;
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

// ln(i!) for i = 0..n_max, built once; every ln C(n,k) is then three lookups.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t n_max) : log_fact_(n_max + 1) {
    for (std::size_t i = 0; i <= n_max; ++i)
      log_fact_[i] = std::lgamma(static_cast<double>(i) + 1.0);
  }

  std::size_t n_max() const { return log_fact_.size() - 1; }

  double log_factorial(std::size_t i) const { return log_fact_.at(i); }

  double log_binomial(std::size_t n, std::size_t k) const {
    if (n >= log_fact_.size() || k > n) throw std::domain_error("log_binomial: bad arguments");
    if (k == 0 || k == n) return 0.0;  // exactly ln 1
    return log_fact_[n] - log_fact_[k] - log_fact_[n - k];
  }

 private:
  std::vector<double> log_fact_;
};

inline double log_binomial(std::size_t n, std::size_t k) {
  return LogFactorialTable(n).log_binomial(n, k);
}

// Accumulates ln(sum exp(t_i)) with the peak term factored out, so the
// intermediate sum stays in [1, count] and never overflows or degrades.
// A single term passes through unchanged.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term <= peak_) {
      acc_ += std::exp(log_term - peak_);
    } else {
      acc_ = acc_ * std::exp(peak_ - log_term) + 1.0;
      peak_ = log_term;
    }
  }

  double value() const {
    if (acc_ == 0.0) return -std::numeric_limits<double>::infinity();
    return peak_ + std::log(acc_);
  }

 private:
  double peak_ = -std::numeric_limits<double>::infinity();
  double acc_ = 0.0;
};

namespace detail {

// One level transition in log domain, producing ln f_{d'}(m) for m < width:
// out[m] = ln d' + LSE over k < m of (ln C(m,k) + ln C(m-1,k) + in[k]).
inline std::vector<double> log_next_row(const LogFactorialTable& lf, const std::vector<double>& prev,
                                        std::size_t width, double log_alphabet,
                                        std::uint64_t* terms) {
  std::vector<double> out(width);
  out[0] = 0.0;
  for (std::size_t m = 1; m < width; ++m) {
    LogSumExp sum;
    for (std::size_t k = 0; k < m; ++k) {
      sum.add(lf.log_binomial(m, k) + lf.log_binomial(m - 1, k) + prev[k]);
      if (terms) ++*terms;
    }
    out[m] = log_alphabet + sum.value();
  }
  return out;
}

}  // namespace detail

// ln f_d(n) by the same shrinking-band recursion as count_fast, entirely in
// doubles. term_count, when given, receives the number of inner-sum terms
// evaluated (the log-domain analogue of the exact path's operation count).
inline double log_count_fast(const Params& p, std::uint64_t* term_count = nullptr) {
  detail::require_positive_alphabet(p);
  const std::size_t n = p.n;
  const std::size_t levels = detail::fast_levels(p);
  if (term_count) *term_count = 0;
  if (levels == 0) return 0.0;  // d == 1 or n == 0: the count is exactly 1
  const LogFactorialTable lf(n);
  std::vector<double> row(n - levels + 1, 0.0);
  Count alphabet = p.d - static_cast<unsigned long>(levels);
  for (std::size_t t = levels; t-- > 1;) {
    alphabet += 1;
    row = detail::log_next_row(lf, row, n - t + 1, log_of(alphabet), term_count);
  }
  alphabet += 1;  // == d
  LogSumExp sum;
  for (std::size_t k = 0; k < n; ++k) {
    sum.add(lf.log_binomial(n, k) + lf.log_binomial(n - 1, k) + row[k]);
    if (term_count) ++*term_count;
  }
  return log_of(alphabet) + sum.value();
}

// ln f_d(n) for every n = 0..n_max in one sweep: running the final level at
// full width makes the top row itself the curve for this alphabet.
inline std::vector<double> log_curve_row(const Count& d, std::size_t n_max,
                                         std::uint64_t* term_count = nullptr) {
  const Params p{d, n_max};
  detail::require_positive_alphabet(p);
  const std::size_t levels = detail::fast_levels(p);
  if (levels == 0) return std::vector<double>(n_max + 1, 0.0);
  const LogFactorialTable lf(n_max);
  std::vector<double> row(n_max - levels + 1, 0.0);
  Count alphabet = d - static_cast<unsigned long>(levels);
  for (std::size_t t = levels; t-- > 0;) {
    alphabet += 1;
    row = detail::log_next_row(lf, row, n_max - t + 1, log_of(alphabet), term_count);
  }
  return row;
}

// Curve matrix: rows follow d_list, columns are n = 0..n_max.
inline std::vector<std::vector<double>> curve(const std::vector<Count>& d_list, std::size_t n_max) {
  std::vector<std::vector<double>> rows;
  rows.reserve(d_list.size());
  for (const Count& d : d_list) rows.push_back(log_curve_row(d, n_max));
  return rows;
}

// The default curve grid: alphabet sizes 2^0 .. 2^9, lengths up to 99,
// giving a 10 x 100 matrix.
inline std::vector<Count> curve_preset_alphabets() {
  std::vector<Count> d_list;
  for (int j = 0; j <= 9; ++j) d_list.push_back(Count(1) << j);
  return d_list;
}

inline constexpr std::size_t curve_preset_n_max = 99;

}  // namespace absq
