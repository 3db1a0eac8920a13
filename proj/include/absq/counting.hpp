#pragma once

// Exact counting of abelian squares: f_d(n) is the number of word pairs
// (x, y), each of length n over a d-symbol alphabet, where x is an anagram
// of y. Four algorithms share one arbitrary-precision substrate (GMP): two
// enumeration oracles, the classic O(n^2 d) level recursion, and the
// O(n^2 min(n,d)) recursion that stays cheap for astronomically large d.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace absq {

using Count = mpz_class;     // arbitrary-precision non-negative integer
using Rational = mpq_class;  // exact rational (sampler traces)

// Symbol multiplicities of a word (Parikh vector); entries sum to the length.
using Signature = std::vector<std::size_t>;

// Problem size: alphabet of d symbols, half-words of length n. d is kept
// arbitrary precision so alphabet sizes like 2^64 remain exact; the
// recursions only ever need min(n, d) as a machine integer.
struct Params {
  Count d;
  std::size_t n = 0;
};

inline constexpr std::uint64_t default_enumeration_budget = 10'000'000;

// Raised when an enumeration algorithm would visit more objects than allowed.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& detail)
      : std::runtime_error("oracle infeasible at this scale: " + detail) {}
};

// Pascal's triangle of exact binomial coefficients C(n, k), 0 <= k <= n <= n_max.
class BinomialTable {
 public:
  explicit BinomialTable(std::size_t n_max) : rows_(n_max + 1) {
    for (std::size_t n = 0; n <= n_max; ++n) {
      rows_[n].resize(n + 1);
      rows_[n][0] = 1;
      rows_[n][n] = 1;
      for (std::size_t k = 1; k < n; ++k)
        rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
    }
  }

  std::size_t n_max() const { return rows_.size() - 1; }

  const Count& at(std::size_t n, std::size_t k) const {
    if (n >= rows_.size() || k > n) throw std::out_of_range("BinomialTable::at");
    return rows_[n][k];
  }

  const std::vector<Count>& row(std::size_t n) const {
    if (n >= rows_.size()) throw std::out_of_range("BinomialTable::row");
    return rows_[n];
  }

 private:
  std::vector<std::vector<Count>> rows_;
};

inline BinomialTable build_binomial_table(std::size_t n_max) { return BinomialTable(n_max); }

// Number of distinct words with the given symbol multiplicities:
// (m_1 + ... + m_d)! / (m_1! ... m_d!), assembled as a product of binomial
// coefficients so no full factorial is ever formed.
inline Count multinomial(const Signature& sig) {
  Count result = 1;
  Count factor;
  unsigned long placed = 0;
  for (std::size_t count : sig) {
    if (count == 0) continue;
    placed += count;
    mpz_bin_uiui(factor.get_mpz_t(), placed, count);
    result *= factor;
  }
  return result;
}

namespace detail {

inline void require_positive_alphabet(const Params& p) {
  if (p.d < 1) throw std::invalid_argument("alphabet size d must be >= 1 for this algorithm");
}

// Number of signatures with entries summing to n: C(n + d - 1, n).
// O(n) big-integer steps, so feasible to *check* even when d is huge.
inline Count signature_space(const Count& d, std::size_t n) {
  Count result = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    result *= d - 1 + static_cast<unsigned long>(i);
    mpz_divexact_ui(result.get_mpz_t(), result.get_mpz_t(), static_cast<unsigned long>(i));
  }
  return result;
}

// Number of words of length n: d^n.
inline Count word_space(const Count& d, std::size_t n) {
  Count result;
  mpz_pow_ui(result.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(n));
  return result;
}

inline void check_budget(const Count& objects, std::uint64_t budget, const char* what) {
  if (objects > static_cast<unsigned long>(budget))
    throw InfeasibleError(std::string(what) + " would enumerate " + objects.get_str() +
                          " objects (budget " + std::to_string(budget) + ")");
}

// Visit every word of {0..d-1}^n in lexicographic order. The callback gets
// the word and its sparse signature (symbol -> multiplicity, zeros absent),
// both maintained incrementally.
template <typename Visit>
void for_each_word(std::size_t d, std::size_t n, Visit&& visit) {
  std::vector<std::size_t> word(n, 0);
  std::map<std::size_t, std::size_t> sig;
  if (n > 0) sig[0] = n;
  const auto drop = [&sig](std::size_t symbol) {
    const auto it = sig.find(symbol);
    if (--(it->second) == 0) sig.erase(it);
  };
  for (;;) {
    visit(word, sig);
    std::size_t pos = n;
    while (pos > 0 && word[pos - 1] == d - 1) --pos;
    if (pos == 0) return;
    --pos;
    drop(word[pos]);
    ++word[pos];
    ++sig[word[pos]];
    for (std::size_t i = pos + 1; i < n; ++i) {
      drop(word[i]);
      word[i] = 0;
      ++sig[0];
    }
  }
}

// multinomial() over a sparse signature.
inline Count multinomial_sparse(const std::map<std::size_t, std::size_t>& sig) {
  Count result = 1;
  Count factor;
  unsigned long placed = 0;
  for (const auto& [symbol, count] : sig) {
    placed += count;
    mpz_bin_uiui(factor.get_mpz_t(), placed, count);
    result *= factor;
  }
  return result;
}

// Level transitions of the shrinking-band recursion: min(n, d - 1).
inline std::size_t fast_levels(const Params& p) {
  if (p.d > static_cast<unsigned long>(p.n)) return p.n;
  return static_cast<std::size_t>(p.d.get_ui()) - 1;
}

}  // namespace detail

// Direct evaluation: the sum of squared multinomial coefficients over every
// signature with entries summing to n. Feasible only while C(n+d-1, d-1)
// stays within budget; the signature vector itself must also be
// materializable, hence the extra d <= budget requirement.
inline Count count_signature_sum(const Params& p, std::uint64_t budget = default_enumeration_budget) {
  detail::require_positive_alphabet(p);
  detail::check_budget(detail::signature_space(p.d, p.n), budget, "signature sum");
  if (p.d > static_cast<unsigned long>(budget))
    throw InfeasibleError("signature sum over " + p.d.get_str() + " symbols");
  const std::size_t d = p.d.get_ui();
  Signature sig(d, 0);
  sig[0] = p.n;
  Count total = 0;
  Count w;
  for (;;) {
    w = multinomial(sig);
    total += w * w;
    if (sig[d - 1] == p.n) break;
    // next composition: move one unit right of the rightmost nonzero head entry
    std::size_t i = d - 2;
    while (sig[i] == 0) --i;
    const std::size_t tail = sig[d - 1];
    sig[d - 1] = 0;
    --sig[i];
    sig[i + 1] = tail + 1;
  }
  return total;
}

// f_d(n) as the sum over all words x of the number of anagrams of x.
inline Count count_anagram_sum(const Params& p, std::uint64_t budget = default_enumeration_budget) {
  detail::require_positive_alphabet(p);
  detail::check_budget(detail::word_space(p.d, p.n), budget, "anagram sum");
  Count total = 0;
  detail::for_each_word(p.d.get_ui(), p.n, [&total](const auto&, const auto& sig) {
    total += detail::multinomial_sparse(sig);
  });
  return total;
}

// Enumerates every word, groups words into anagram classes, and sums the
// squared class sizes; a pair is an abelian square exactly when both halves
// land in the same class.
inline Count count_brute_force(const Params& p, std::uint64_t budget = default_enumeration_budget) {
  detail::require_positive_alphabet(p);
  detail::check_budget(detail::word_space(p.d, p.n), budget, "brute force");
  using SparseKey = std::vector<std::pair<std::size_t, std::size_t>>;
  std::map<SparseKey, std::uint64_t> classes;
  detail::for_each_word(p.d.get_ui(), p.n, [&classes](const auto&, const auto& sig) {
    ++classes[SparseKey(sig.begin(), sig.end())];
  });
  Count total = 0;
  Count size;
  for (const auto& [key, members] : classes) {
    size = static_cast<unsigned long>(members);
    total += size * size;
  }
  return total;
}

// Bottom-up evaluation of f_i(m) = sum_{k<=m} C(m,k)^2 f_{i-1}(k), carrying
// the full row f_i(0..n) through all d-1 level transitions.
// The squared binomials are level-independent and built once. Every inner-sum
// term evaluation increments *mac_count when provided.
inline Count count_richmond(const Params& p, std::uint64_t* mac_count = nullptr) {
  detail::require_positive_alphabet(p);
  std::uint64_t macs = 0;
  std::vector<Count> row(p.n + 1, 1);  // f_1(0..n)
  if (p.d > 1) {
    if (!p.d.fits_ulong_p())
      throw std::overflow_error("Richmond recursion over " + p.d.get_str() +
                                " levels exceeds addressable work");
    const std::size_t d = p.d.get_ui();
    const std::size_t n = p.n;
    const BinomialTable binom(n);
    std::vector<std::vector<Count>> sq(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
      sq[m].resize(m + 1);
      for (std::size_t k = 0; k <= m; ++k) sq[m][k] = binom.at(m, k) * binom.at(m, k);
    }
    std::vector<Count> next(n + 1);
    Count acc;
    for (std::size_t level = 2; level <= d; ++level) {
      for (std::size_t m = 0; m <= n; ++m) {
        acc = 0;
        for (std::size_t k = 0; k <= m; ++k) {
          acc += sq[m][k] * row[k];
          ++macs;
        }
        next[m] = acc;
      }
      row.swap(next);
    }
  }
  if (mac_count) *mac_count = macs;
  return row[p.n];
}

// The min(n, d-1)-level recursion f_d(n) = d * sum_{k<n} C(n,k) C(n-1,k) f_{d-1}(k).
// Each level drops one symbol and one position, so the evaluation region is a
// shrinking triangle; d itself appears only as the per-level multiplier, kept
// as an exact big integer so alphabets beyond machine words work unchanged.
// Interior levels carry full rows; the top level evaluates f_d(n) alone.
inline Count count_fast(const Params& p, std::uint64_t* mac_count = nullptr) {
  detail::require_positive_alphabet(p);
  const std::size_t n = p.n;
  const std::size_t levels = detail::fast_levels(p);
  std::uint64_t macs = 0;
  Count result = 1;
  if (levels > 0) {
    const BinomialTable binom(n);
    // w[m][k] = C(m,k) C(m-1,k): level-independent weights, built once
    std::vector<std::vector<Count>> w(n + 1);
    for (std::size_t m = 1; m <= n; ++m) {
      w[m].resize(m);
      for (std::size_t k = 0; k < m; ++k) w[m][k] = binom.at(m, k) * binom.at(m - 1, k);
    }
    std::vector<Count> row(n - levels + 1, 1);  // base row: all ones either way
    std::vector<Count> next;
    Count alphabet = p.d - static_cast<unsigned long>(levels);
    Count acc;
    for (std::size_t t = levels; t-- > 1;) {
      alphabet += 1;
      const std::size_t width = n - t + 1;
      next.assign(width, Count(0));
      next[0] = 1;
      for (std::size_t m = 1; m < width; ++m) {
        acc = 0;
        for (std::size_t k = 0; k < m; ++k) {
          acc += w[m][k] * row[k];
          ++macs;
        }
        next[m] = alphabet * acc;
      }
      row.swap(next);
    }
    alphabet += 1;  // == d
    acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += w[n][k] * row[k];
      ++macs;
    }
    result = alphabet * acc;
  }
  if (mac_count) *mac_count = macs;
  return result;
}

// The interior rows f_{d-L}(0..n-L) .. f_{d-1}(0..n-1) of the fast recursion,
// retained for consumers that need every value of the band (the exact sampler).
struct FastBand {
  Count base_alphabet;                   // alphabet size of rows.front()
  std::vector<std::vector<Count>> rows;  // rows[j] = f_{base_alphabet + j}(0..n-L+j)
};

inline FastBand build_fast_band(const Params& p) {
  detail::require_positive_alphabet(p);
  const std::size_t n = p.n;
  const std::size_t levels = detail::fast_levels(p);
  FastBand band;
  band.base_alphabet = p.d - static_cast<unsigned long>(levels);
  if (levels == 0) return band;
  const BinomialTable binom(n);
  band.rows.reserve(levels);
  band.rows.emplace_back(n - levels + 1, Count(1));
  Count alphabet = band.base_alphabet;
  Count acc;
  for (std::size_t t = levels; t-- > 1;) {
    alphabet += 1;
    const std::size_t width = n - t + 1;
    const auto& prev = band.rows.back();
    std::vector<Count> next(width);
    next[0] = 1;
    for (std::size_t m = 1; m < width; ++m) {
      acc = 0;
      for (std::size_t k = 0; k < m; ++k) acc += binom.at(m, k) * binom.at(m - 1, k) * prev[k];
      next[m] = alphabet * acc;
    }
    band.rows.push_back(std::move(next));
  }
  return band;
}

// Exact f_i(m) for every 1 <= i <= d_max, 0 <= m <= n_max, as one bottom-up
// sweep that keeps each level's full row; table[i-1][m] = f_i(m).
inline std::vector<std::vector<Count>> count_table(std::size_t d_max, std::size_t n_max) {
  if (d_max < 1) throw std::invalid_argument("d_max must be >= 1");
  std::vector<std::vector<Count>> table;
  table.reserve(d_max);
  table.emplace_back(n_max + 1, Count(1));
  if (d_max > 1) {
    const BinomialTable binom(n_max);
    Count acc;
    Count square;
    for (std::size_t level = 2; level <= d_max; ++level) {
      const std::vector<Count>& prev = table.back();
      std::vector<Count> next(n_max + 1);
      for (std::size_t m = 0; m <= n_max; ++m) {
        acc = 0;
        for (std::size_t k = 0; k <= m; ++k) {
          square = binom.at(m, k) * binom.at(m, k);
          acc += square * prev[k];
        }
        next[m] = acc;
      }
      table.push_back(std::move(next));
    }
  }
  return table;
}

enum class Algorithm { Auto, Fast, Richmond, SignatureSum, AnagramSum, BruteForce };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Auto: return "auto";
    case Algorithm::Fast: return "fast";
    case Algorithm::Richmond: return "richmond";
    case Algorithm::SignatureSum: return "signature";
    case Algorithm::AnagramSum: return "anagram";
    case Algorithm::BruteForce: return "brute";
  }
  throw std::logic_error("unknown algorithm");
}

inline Algorithm parse_algorithm(std::string_view name) {
  if (name == "auto") return Algorithm::Auto;
  if (name == "fast") return Algorithm::Fast;
  if (name == "richmond") return Algorithm::Richmond;
  if (name == "signature") return Algorithm::SignatureSum;
  if (name == "anagram") return Algorithm::AnagramSum;
  if (name == "brute") return Algorithm::BruteForce;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

// Total dispatcher: defined for every d >= 0, n >= 0. The empty alphabet
// admits exactly one (empty) pair at n = 0 and none otherwise.
inline Count count(const Params& p, Algorithm algorithm = Algorithm::Auto,
                   std::uint64_t budget = default_enumeration_budget) {
  if (p.d < 0) throw std::invalid_argument("alphabet size d must be non-negative");
  if (p.d == 0) return p.n == 0 ? Count(1) : Count(0);
  switch (algorithm) {
    case Algorithm::Auto:
    case Algorithm::Fast: return count_fast(p);
    case Algorithm::Richmond: return count_richmond(p);
    case Algorithm::SignatureSum: return count_signature_sum(p, budget);
    case Algorithm::AnagramSum: return count_anagram_sum(p, budget);
    case Algorithm::BruteForce: return count_brute_force(p, budget);
  }
  throw std::logic_error("unknown algorithm");
}

// Exact number of multiply-accumulate steps the chosen recursion performs
// for these parameters. Deterministic; defined for the two DP algorithms.
inline std::uint64_t mac_count(const Params& p, Algorithm algorithm) {
  std::uint64_t macs = 0;
  if (algorithm == Algorithm::Fast) {
    count_fast(p, &macs);
  } else if (algorithm == Algorithm::Richmond) {
    count_richmond(p, &macs);
  } else {
    throw std::invalid_argument("operation counts are defined for fast and richmond only");
  }
  return macs;
}

}  // namespace absq
