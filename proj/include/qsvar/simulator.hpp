#ifndef QSVAR_SIMULATOR_HPP
#define QSVAR_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "qsvar/errors.hpp"
#include "qsvar/moments.hpp"
#include "qsvar/rational.hpp"

namespace qsvar {

/// SplitMix64 (Steele, Lea & Flood 2014; finalizer is Stafford's "Mix13").
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t state_;
};

/// Seed of trial t's private stream: output t of a SplitMix64 stream started
/// at `seed`, computed directly, so trials can run in any order.
constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return SplitMix64::mix(seed + (trial + 1) * SplitMix64::kGamma);
}

/// Uniform integer in [0, bound) by rejection, free of modulo bias.
template <typename Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

template <typename T>
struct QuicksortResult {
  std::vector<T> sorted;
  std::uint64_t comparisons = 0;
};

/// Randomized Quicksort that counts key comparisons. Each subproblem of size
/// s >= 2 picks its pivot uniformly and spends s - 1 comparisons splitting the
/// rest into a smaller and a larger part (stable). Equal keys are rejected.
template <typename T, typename Rng>
QuicksortResult<T> quicksort_count(std::span<const T> items, Rng& rng) {
  QuicksortResult<T> result{std::vector<T>(items.begin(), items.end()), 0};
  auto& keys = result.sorted;
  std::vector<T> scratch(keys.size());
  std::vector<std::pair<std::size_t, std::size_t>> pending;
  if (keys.size() >= 2) pending.emplace_back(0, keys.size());

  while (!pending.empty()) {
    const auto [lo, hi] = pending.back();
    pending.pop_back();
    const std::size_t size = hi - lo;
    const std::size_t pivot_at = lo + uniform_index(rng, size);
    const T pivot = keys[pivot_at];
    result.comparisons += size - 1;

    std::size_t front = lo;
    std::size_t larger = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      if (i == pivot_at) continue;
      if (keys[i] < pivot) {
        scratch[front++] = keys[i];
      } else if (pivot < keys[i]) {
        scratch[hi - 1 - larger++] = keys[i];
      } else {
        throw std::invalid_argument("quicksort_count: duplicate keys");
      }
    }
    const std::size_t mid = front;
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(mid),
              keys.begin() + static_cast<std::ptrdiff_t>(lo));
    keys[mid] = pivot;
    // The larger part was written back to front; restore input order.
    for (std::size_t i = 0; i < larger; ++i) keys[mid + 1 + i] = scratch[hi - 1 - i];

    if (mid - lo >= 2) pending.emplace_back(lo, mid);
    if (hi - mid - 1 >= 2) pending.emplace_back(mid + 1, hi);
  }
  return result;
}

template <typename T, typename Rng>
QuicksortResult<T> quicksort_count(const std::vector<T>& items, Rng& rng) {
  return quicksort_count(std::span<const T>(items), rng);
}

enum class InputMode { identity, random_permutation };

inline std::string to_string(InputMode mode) {
  return mode == InputMode::identity ? "identity" : "random_permutation";
}

inline InputMode parse_input_mode(std::string_view text) {
  if (text == "identity") return InputMode::identity;
  if (text == "random_permutation" || text == "random") return InputMode::random_permutation;
  throw std::invalid_argument("unknown input mode '" + std::string(text) + "'");
}

struct SimConfig {
  std::size_t n = 0;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  InputMode input_mode = InputMode::identity;

  void validate() const {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct SampleStats {
  SimConfig config;
  double sample_mean = 0.0;
  double sample_variance = 0.0;  // unbiased, divisor samples - 1
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t min_k = 0;
  std::uint64_t max_k = 0;

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

struct ZReport {
  std::size_t n = 0;
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  double mean_z = 0.0;
  double variance_z = 0.0;
  bool pass = false;

  friend bool operator==(const ZReport&, const ZReport&) = default;
};

/// One trial: build the input for trial t and sort it.
inline QuicksortResult<std::uint32_t> run_trial(const SimConfig& config, std::uint64_t trial) {
  SplitMix64 rng(child_seed(config.seed, trial));
  std::vector<std::uint32_t> keys(config.n);
  std::iota(keys.begin(), keys.end(), 1U);
  if (config.input_mode == InputMode::random_permutation) {
    for (std::size_t i = keys.size(); i > 1; --i) {
      std::swap(keys[i - 1], keys[uniform_index(rng, i)]);
    }
  }
  return quicksort_count(keys, rng);
}

namespace detail {

inline void sample_moments(SampleStats& stats) {
  mpz_class count;
  mpz_class s1;
  mpz_class s2;
  for (const auto& [k, c] : stats.histogram) {
    const mpz_class kk(static_cast<unsigned long>(k));
    const mpz_class cc(static_cast<unsigned long>(c));
    count += cc;
    s1 += cc * kk;
    s2 += cc * kk * kk;
  }
  stats.sample_mean = Rational(s1, count).to_double();
  stats.sample_variance =
      count > 1 ? Rational(count * s2 - s1 * s1, count * (count - 1)).to_double() : 0.0;
  stats.min_k = stats.histogram.begin()->first;
  stats.max_k = stats.histogram.rbegin()->first;
}

// Fourth central moment (divisor samples), exact until the final rounding.
inline double fourth_central_moment(const SampleStats& stats) {
  Rational count;
  Rational s1;
  for (const auto& [k, c] : stats.histogram) {
    count += Rational(static_cast<unsigned long>(c));
    s1 += Rational(static_cast<unsigned long>(c)) * Rational(static_cast<unsigned long>(k));
  }
  const Rational mean = s1 / count;
  Rational m4;
  for (const auto& [k, c] : stats.histogram) {
    const Rational d = Rational(static_cast<unsigned long>(k)) - mean;
    const Rational d2 = d * d;
    m4 += Rational(static_cast<unsigned long>(c)) * d2 * d2;
  }
  return (m4 / count).to_double();
}

}  // namespace detail

/// Runs config.samples independent trials. Results do not depend on
/// `threads`: every trial owns its stream and aggregation is via integer
/// histogram counts.
inline SampleStats run_trials(const SimConfig& config, unsigned threads = 1) {
  config.validate();
  threads = std::max(1U, threads);
  const std::uint64_t workers = std::min<std::uint64_t>(threads, config.samples);

  std::vector<std::map<std::uint64_t, std::uint64_t>> partial(workers);
  auto work = [&](std::uint64_t worker) {
    const std::uint64_t begin = config.samples * worker / workers;
    const std::uint64_t end = config.samples * (worker + 1) / workers;
    auto& hist = partial[worker];
    for (std::uint64_t t = begin; t < end; ++t) {
      const auto result = run_trial(config, t);
      if (!std::is_sorted(result.sorted.begin(), result.sorted.end())) {
        throw std::logic_error("quicksort_count produced unsorted output");
      }
      ++hist[result.comparisons];
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SampleStats stats{config, 0.0, 0.0, {}, 0, 0};
  for (const auto& hist : partial) {
    for (const auto& [k, c] : hist) stats.histogram[k] += c;
  }
  detail::sample_moments(stats);
  return stats;
}

inline ZReport compare_to_exact(const SampleStats& stats, std::size_t max_n = kExactGuard) {
  const std::size_t n = stats.config.n;
  check_guard("exact", n, max_n);
  ZReport z;
  z.n = n;
  z.exact_mean = mean_comparisons(n, max_n).to_double();
  z.exact_variance = variance_closed(n, max_n).to_double();
  const double samples = static_cast<double>(stats.config.samples);
  constexpr double inf = std::numeric_limits<double>::infinity();

  const double mean_diff = stats.sample_mean - z.exact_mean;
  if (z.exact_variance > 0.0) {
    z.mean_z = mean_diff / std::sqrt(z.exact_variance / samples);
  } else {
    z.mean_z = mean_diff == 0.0 ? 0.0 : std::copysign(inf, mean_diff);
  }

  if (n <= 2) {
    z.variance_z = 0.0;
  } else {
    const double s2 = stats.sample_variance;
    const double var_diff = s2 - z.exact_variance;
    const double m4 = detail::fourth_central_moment(stats);
    const double se = stats.config.samples > 3
                          ? std::sqrt((m4 - s2 * s2 * (samples - 3) / (samples - 1)) / samples)
                          : 0.0;
    if (se > 0.0 && std::isfinite(se)) {
      z.variance_z = var_diff / se;
    } else {
      z.variance_z = var_diff == 0.0 ? 0.0 : std::copysign(inf, var_diff);
    }
  }
  z.pass = std::fabs(z.mean_z) <= 4.0 && std::fabs(z.variance_z) <= 6.0;
  return z;
}

}  // namespace qsvar

#endif  // QSVAR_SIMULATOR_HPP
