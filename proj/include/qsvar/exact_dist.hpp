#ifndef QSVAR_EXACT_DIST_HPP
#define QSVAR_EXACT_DIST_HPP

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsvar/errors.hpp"
#include "qsvar/moments.hpp"
#include "qsvar/rational.hpp"

namespace qsvar {

/// Exact law of C_n: probs[k] = P(C_n = k) for k = 0 .. n(n-1)/2.
struct ComparisonDistribution {
  std::size_t n = 0;
  std::vector<Rational> probs;

  static constexpr std::size_t max_comparisons(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

  /// Smallest k with nonzero mass.
  std::size_t min_support() const {
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k].sign() != 0) return k;
    }
    return probs.size();
  }

  /// Dense length, nonnegative entries summing to exactly 1, no mass below n - 1.
  bool satisfies_invariants() const {
    if (probs.size() != max_comparisons(n) + 1) return false;
    Rational total;
    for (const auto& p : probs) {
      if (p.sign() < 0) return false;
      total += p;
    }
    if (total != Rational(1)) return false;
    return n == 0 || min_support() + 1 >= n;
  }

  friend bool operator==(const ComparisonDistribution&, const ComparisonDistribution&) = default;
};

namespace detail {

// Coefficients of n! * f_n(z), which are integers (the number of input
// orders needing k comparisons under first-element pivoting). Built with
//   n! f_n = z^{n-1} sum_{j=1}^n C(n-1, j-1) [(j-1)! f_{j-1}] [(n-j)! f_{n-j}],
// the generating-function recurrence multiplied through by n!.
class DistributionTable {
 public:
  std::vector<mpz_class> counts(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (rows_.empty()) {
      rows_.push_back({mpz_class(1)});
      rows_.push_back({mpz_class(1)});
    }
    while (rows_.size() <= n) rows_.push_back(next_row(rows_.size()));
    return rows_[n];
  }

 private:
  std::vector<mpz_class> next_row(std::size_t m) const {
    const std::size_t inner_len = ComparisonDistribution::max_comparisons(m - 1) + 1;
    std::vector<mpz_class> acc(inner_len);
    std::vector<mpz_class> product(inner_len);

    // Terms j and m+1-j are equal, so only the first half is convolved.
    for (std::size_t j = 1; 2 * j <= m + 1; ++j) {
      const auto& left = rows_[j - 1];
      const auto& right = rows_[m - j];
      std::fill(product.begin(), product.end(), 0);
      for (std::size_t a = 0; a < left.size(); ++a) {
        if (left[a] == 0) continue;
        for (std::size_t b = 0; b < right.size(); ++b) {
          mpz_addmul(product[a + b].get_mpz_t(), left[a].get_mpz_t(), right[b].get_mpz_t());
        }
      }
      mpz_class weight = binomial(m - 1, j - 1);
      if (2 * j != m + 1) weight *= 2;
      for (std::size_t k = 0; k < inner_len; ++k) {
        mpz_addmul(acc[k].get_mpz_t(), weight.get_mpz_t(), product[k].get_mpz_t());
      }
    }

    // Shift by z^{m-1} once after summing.
    std::vector<mpz_class> row(ComparisonDistribution::max_comparisons(m) + 1);
    for (std::size_t k = 0; k < inner_len; ++k) row[k + m - 1] = std::move(acc[k]);
    return row;
  }

  std::mutex mutex_;
  std::vector<std::vector<mpz_class>> rows_;
};

inline DistributionTable& distribution_table() {
  static DistributionTable table;
  return table;
}

inline ComparisonDistribution from_counts(std::size_t n, const std::vector<mpz_class>& counts) {
  const mpz_class total = factorial(n);
  ComparisonDistribution dist{n, {}};
  dist.probs.reserve(counts.size());
  for (const auto& c : counts) dist.probs.emplace_back(c, total);
  return dist;
}

}  // namespace detail

/// Exact distribution of C_n from the generating-function recurrence.
inline ComparisonDistribution distribution(std::size_t n, std::size_t max_n = kDistributionGuard) {
  check_guard("distribution", n, max_n);
  return detail::from_counts(n, detail::distribution_table().counts(n));
}

inline MomentReport moments_of(const ComparisonDistribution& dist) {
  Rational mean;
  Rational second_factorial;
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    if (dist.probs[k].sign() == 0) continue;
    const Rational kk = detail::q(k);
    mean += kk * dist.probs[k];
    if (k >= 2) second_factorial += kk * (kk - 1) * dist.probs[k];
  }
  Rational variance = second_factorial + mean - mean * mean;
  return MomentReport{dist.n, std::move(mean), std::move(second_factorial), std::move(variance)};
}

/// f_n(z) = sum_k P(C_n = k) z^k, by Horner's rule.
inline Rational pgf_eval(const ComparisonDistribution& dist, const Rational& z) {
  Rational acc;
  for (auto it = dist.probs.rbegin(); it != dist.probs.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

/// Evaluates both sides of f_n(z) = (z^{n-1}/n) sum_j f_{j-1}(z) f_{n-j}(z).
inline std::pair<Rational, Rational> pgf_recurrence_check(std::size_t n, const Rational& z,
                                                          std::size_t max_n = kDistributionGuard) {
  if (n < 1) throw std::invalid_argument("pgf_recurrence_check requires n >= 1");
  check_guard("distribution", n, max_n);
  const Rational lhs = pgf_eval(distribution(n, max_n), z);
  std::vector<Rational> lower;
  lower.reserve(n);
  for (std::size_t i = 0; i < n; ++i) lower.push_back(pgf_eval(distribution(i, max_n), z));
  Rational sum;
  for (std::size_t j = 1; j <= n; ++j) sum += lower[j - 1] * lower[n - j];
  const Rational rhs = pow(z, static_cast<long>(n - 1)) / detail::q(n) * sum;
  return {lhs, rhs};
}

namespace detail {

// First-element pivot, stable split into smaller and larger subsequences.
inline std::size_t first_pivot_comparisons(const std::vector<int>& keys) {
  if (keys.size() < 2) return 0;
  const int pivot = keys.front();
  std::vector<int> smaller;
  std::vector<int> larger;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    (keys[i] < pivot ? smaller : larger).push_back(keys[i]);
  }
  return keys.size() - 1 + first_pivot_comparisons(smaller) + first_pivot_comparisons(larger);
}

}  // namespace detail

/// Distribution of the comparison count of deterministic first-element-pivot
/// Quicksort over all n! input orders, each weighted equally.
inline ComparisonDistribution permutation_oracle(std::size_t n, std::size_t max_n = kOracleGuard) {
  if (n < 1) throw std::invalid_argument("permutation_oracle requires n >= 1");
  check_guard("oracle", n, max_n);
  std::vector<mpz_class> counts(ComparisonDistribution::max_comparisons(n) + 1);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    ++counts[detail::first_pivot_comparisons(perm)];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return detail::from_counts(n, counts);
}

}  // namespace qsvar

#endif  // QSVAR_EXACT_DIST_HPP
