#pragma once

// Exactly uniform random generation of abelian squares, by running the
// shrinking-band recursion constructively: choose the first symbol of x,
// choose how many positions the remaining symbols occupy in each word
// (weighted by C(n,k) C(n-1,k) f_{d-1}(k)), choose those position sets, then
// recurse on the sub-pair over the alphabet minus the chosen symbol. Every
// decision is an exact integer draw; the emitted trace multiplies back to
// exactly 1 / f_d(n).

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "absq/counting.hpp"

namespace absq {

// A candidate abelian square: two words of equal length, symbols 0..d-1.
// Symbols are big integers so alphabets beyond machine words stay exact.
struct WordPair {
  std::vector<Count> x, y;

  bool operator==(const WordPair& other) const { return x == other.x && y == other.y; }
  bool operator<(const WordPair& other) const {
    if (x != other.x) return std::lexicographical_compare(x.begin(), x.end(), other.x.begin(), other.x.end());
    return std::lexicographical_compare(y.begin(), y.end(), other.y.begin(), other.y.end());
  }
};

inline bool is_abelian_square(const WordPair& pair) {
  if (pair.x.size() != pair.y.size()) return false;
  std::vector<Count> a = pair.x;
  std::vector<Count> b = pair.y;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// One recorded decision: this branch was taken with probability
// numerator / denominator among the alternatives then available.
struct TraceStep {
  std::string choice;
  Count numerator;
  Count denominator;
};

struct SampleTrace {
  std::vector<TraceStep> steps;
};

// Exact product of the recorded decision ratios. For a well-formed trace of
// a uniform sampler this is 1 / f_d(n).
inline Rational trace_probability(const SampleTrace& trace) {
  Rational probability(1);
  for (const TraceStep& step : trace.steps) {
    if (step.denominator == 0) throw std::invalid_argument("trace step with zero denominator");
    Rational ratio(step.numerator, step.denominator);
    ratio.canonicalize();
    probability *= ratio;
  }
  return probability;
}

// Deterministic randomness: a fixed-width engine extended to exact uniform
// draws below arbitrary-precision bounds via bit-rejection.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound); bound >= 1. A bound of 1 consumes no
  // randomness, so forced decisions never disturb the stream.
  Count uniform_below(const Count& bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    if (bound == 1) return 0;
    const Count top = bound - 1;
    const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    Count draw;
    for (;;) {
      draw = 0;
      for (std::size_t i = 0; i < words; ++i) {
        Count word(static_cast<unsigned long>(engine_()));
        draw |= word << (64 * i);
      }
      draw &= (Count(1) << bits) - 1;
      if (draw < bound) return draw;
    }
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

// The rank-th k-subset of {0..slots-1} in lexicographic order, ascending.
inline std::vector<std::size_t> unrank_combination(const BinomialTable& binom, std::size_t slots,
                                                   std::size_t k, Count rank) {
  std::vector<std::size_t> subset;
  subset.reserve(k);
  std::size_t next = 0;
  while (k > 0) {
    const Count& with_next = binom.at(slots - 1, k - 1);
    if (rank < with_next) {
      subset.push_back(next);
      --k;
    } else {
      rank -= with_next;
    }
    --slots;
    ++next;
  }
  return subset;
}

}  // namespace detail

struct SampleResult {
  WordPair pair;
  SampleTrace trace;
};

// Draw one abelian square uniformly from the f_d(n) candidates.
inline SampleResult sample_abelian_square(const Params& p, SampleRng& rng) {
  detail::require_positive_alphabet(p);
  const std::size_t n = p.n;
  SampleResult result;
  result.pair.x.resize(n);
  result.pair.y.resize(n);
  if (n == 0) return result;

  const BinomialTable binom(n);
  const FastBand band = build_fast_band(p);
  // Weight row f_{d'-1} lives in the band at index j; j == -1 stands for the
  // empty alphabet, whose only anagram pair is the empty one.
  const auto weight_at = [&band](long j, std::size_t k) -> Count {
    if (j >= 0) return band.rows[static_cast<std::size_t>(j)][k];
    return k == 0 ? Count(1) : Count(0);
  };

  // Positions of the sub-pair still to be filled, ascending.
  std::vector<std::size_t> open_x(n), open_y(n);
  for (std::size_t i = 0; i < n; ++i) open_x[i] = open_y[i] = i;

  Count alphabet = p.d;
  long weight_row = static_cast<long>(band.rows.size()) - 1;
  std::vector<Count> removed;  // per level: chosen symbol, relative to that level's alphabet

  std::size_t m = n;
  while (m > 0) {
    // first symbol of the current x sub-word
    const Count symbol_pick = rng.uniform_below(alphabet);
    result.trace.steps.push_back({"symbol", Count(1), alphabet});

    // how many positions the other symbols occupy in each half
    std::vector<Count> weights(m);
    Count total = 0;
    for (std::size_t k = 0; k < m; ++k) {
      weights[k] = binom.at(m, k) * binom.at(m - 1, k) * weight_at(weight_row, k);
      total += weights[k];
    }
    const Count u = rng.uniform_below(total);
    std::size_t k = 0;
    Count cumulative = weights[0];
    while (cumulative <= u) {
      ++k;
      cumulative += weights[k];
    }
    result.trace.steps.push_back({"occupancy", weights[k], total});

    // which of the remaining slots those positions are
    const Count rank_x = rng.uniform_below(binom.at(m - 1, k));
    result.trace.steps.push_back({"x-positions", Count(1), binom.at(m - 1, k)});
    const Count rank_y = rng.uniform_below(binom.at(m, k));
    result.trace.steps.push_back({"y-positions", Count(1), binom.at(m, k)});
    const std::vector<std::size_t> sel_x = detail::unrank_combination(binom, m - 1, k, rank_x);
    const std::vector<std::size_t> sel_y = detail::unrank_combination(binom, m, k, rank_y);

    // translate the level-relative symbol into the original alphabet
    Count symbol = symbol_pick;
    for (auto it = removed.rbegin(); it != removed.rend(); ++it)
      if (symbol >= *it) symbol += 1;

    // x: the leading open slot always takes the symbol; of the rest, the
    // selected slots stay open for the sub-pair. y: selected among all slots.
    std::vector<std::size_t> next_x;
    next_x.reserve(k);
    result.pair.x[open_x[0]] = symbol;
    for (std::size_t i = 1, s = 0; i < m; ++i) {
      if (s < sel_x.size() && sel_x[s] == i - 1) {
        next_x.push_back(open_x[i]);
        ++s;
      } else {
        result.pair.x[open_x[i]] = symbol;
      }
    }
    std::vector<std::size_t> next_y;
    next_y.reserve(k);
    for (std::size_t i = 0, s = 0; i < m; ++i) {
      if (s < sel_y.size() && sel_y[s] == i) {
        next_y.push_back(open_y[i]);
        ++s;
      } else {
        result.pair.y[open_y[i]] = symbol;
      }
    }
    open_x = std::move(next_x);
    open_y = std::move(next_y);

    removed.push_back(symbol_pick);
    alphabet -= 1;
    --weight_row;
    m = k;
  }
  return result;
}

inline SampleResult sample_abelian_square(const Params& p, std::uint64_t seed) {
  SampleRng rng(seed);
  return sample_abelian_square(p, rng);
}

namespace detail {

// Streaming form of the enumeration below. The visitor sees each pair in
// lexicographic order through a reused buffer; the pair list can dwarf d^n
// (d=2, n=13 already yields ten million pairs), so callers that only need
// to count or spot-check should stream rather than materialize.
template <typename Visit>
void for_each_abelian_square(const Params& p, std::uint64_t budget, Visit&& visit) {
  require_positive_alphabet(p);
  check_budget(word_space(p.d, p.n), budget, "enumeration");
  WordPair pair;
  pair.x.resize(p.n);
  pair.y.resize(p.n);
  for_each_word(p.d.get_ui(), p.n, [&](const std::vector<std::size_t>& word, const auto&) {
    for (std::size_t i = 0; i < p.n; ++i) pair.x[i] = static_cast<unsigned long>(word[i]);
    pair.y = pair.x;
    std::sort(pair.y.begin(), pair.y.end());
    do {
      visit(static_cast<const WordPair&>(pair));
    } while (std::next_permutation(pair.y.begin(), pair.y.end()));
  });
}

}  // namespace detail

// Every abelian square of half-length n over d symbols, pairs in
// lexicographic order: x runs through all words, y through the anagrams of x.
inline std::vector<WordPair> enumerate_abelian_squares(const Params& p,
                                                       std::uint64_t budget = default_enumeration_budget) {
  std::vector<WordPair> all;
  detail::for_each_abelian_square(p, budget, [&all](const WordPair& pair) { all.push_back(pair); });
  return all;
}

}  // namespace absq
