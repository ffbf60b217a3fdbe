#ifndef QSVAR_MOMENTS_HPP
#define QSVAR_MOMENTS_HPP

#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qsvar/errors.hpp"
#include "qsvar/harmonic.hpp"
#include "qsvar/rational.hpp"

namespace qsvar {

/// Limit of Var(C_n)/n^2, i.e. 7 - 2*pi^2/3.
inline constexpr double kVarianceRatioLimit = 0.4202637326070943;

/// Exact first two moments of the comparison count C_n.
struct MomentReport {
  std::size_t n = 0;
  Rational mean;              // E[C_n]
  Rational second_factorial;  // E[C_n (C_n - 1)] = f_n''(1) = 2 B_n
  Rational variance;

  /// variance = second_factorial + mean - mean^2, variance >= 0 with
  /// equality iff n <= 2, and mean >= n - 1.
  bool satisfies_invariants() const {
    if (variance != second_factorial + mean - mean * mean) return false;
    if (variance.sign() < 0) return false;
    if ((variance.sign() == 0) != (n <= 2)) return false;
    if (n >= 1 && mean < Rational(static_cast<unsigned long>(n - 1))) return false;
    return true;
  }

  friend bool operator==(const MomentReport&, const MomentReport&) = default;
};

/// M_n = 2(n+1)H_n - 4n.
inline Rational mean_comparisons(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  const Rational N = detail::q(n);
  return Rational(2) * (N + 1) * harmonic(n) - Rational(4) * N;
}

inline MeanEvaluator mean_evaluator() {
  return [](std::size_t j) { return mean_comparisons(j, j); };
}

/// B_n = f_n''(1)/2 in closed form:
/// 2(n+1)^2 (H_n^2 - H_n^(2)) - (8n+2)(n+1)H_n + n(23n+17)/2.
inline Rational b_closed(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  const Rational N = detail::q(n);
  const Rational h = harmonic(n);
  const Rational gap = h * h - harmonic_order(n, 2);
  return Rational(2) * (N + 1) * (N + 1) * gap - (Rational(8) * N + 2) * (N + 1) * h +
         N * (Rational(23) * N + 17) / 2;
}

namespace detail {

// Bottom-up table for
//   B_n = C(n-1,2) + (2(n-1)/n) sum M_{j-1} + (2/n) sum B_{j-1} + (1/n) sum M_{j-1} M_{n-j}
// with the cross term taken as the literal product sum.
class BRecurrenceTable {
 public:
  Rational get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (b_.empty()) {
      b_.emplace_back(0);
      means_.emplace_back(0);
      mean_prefix_.emplace_back(0);
      b_prefix_.emplace_back(0);
    }
    while (b_.size() <= n) {
      const std::size_t m = b_.size();
      const Rational M = q(m);
      // mean_prefix_[m-1] = sum_{j=1}^{m} M_{j-1}; likewise for B.
      Rational cross;
      for (std::size_t j = 1; j <= m; ++j) cross += means_[j - 1] * means_[m - j];
      const Rational bm = Rational(binomial(m - 1, 2)) +
                          Rational(2) * (M - 1) / M * mean_prefix_[m - 1] +
                          Rational(2) / M * b_prefix_[m - 1] + cross / M;
      b_.push_back(bm);
      means_.push_back(mean_comparisons(m, m));
      mean_prefix_.push_back(mean_prefix_.back() + means_.back());
      b_prefix_.push_back(b_prefix_.back() + bm);
    }
    return b_[n];
  }

 private:
  std::mutex mutex_;
  std::vector<Rational> b_;
  std::vector<Rational> means_;
  std::vector<Rational> mean_prefix_;  // mean_prefix_[i] = M_0 + ... + M_i
  std::vector<Rational> b_prefix_;     // b_prefix_[i] = B_0 + ... + B_i
};

inline BRecurrenceTable& b_recurrence_table() {
  static BRecurrenceTable table;
  return table;
}

}  // namespace detail

/// B_n from the defining recurrence, iterated bottom-up and memoized.
inline Rational b_recurrence(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  return detail::b_recurrence_table().get(n);
}

/// sum_{j=1}^n M_{j-1} M_{n-j}, via the harmonic-sum rewrite (registry tag I11).
inline Rational m_cross_sum(std::size_t n, std::size_t max_n = kExactGuard) {
  if (n < 1) throw std::invalid_argument("m_cross_sum requires n >= 1");
  check_guard("exact", n, max_n);
  return closed_sum(IdentityId::I11, n);
}

/// Var(C_n) = 7n^2 - 4(n+1)^2 H_n^(2) - 2(n+1)H_n + 13n.
inline Rational variance_closed(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  const Rational N = detail::q(n);
  return Rational(7) * N * N - Rational(4) * (N + 1) * (N + 1) * harmonic_order(n, 2) -
         Rational(2) * (N + 1) * harmonic(n) + Rational(13) * N;
}

/// Var(C_n) = 2B_n + M_n - M_n^2 with B_n taken from the recurrence.
inline Rational variance_from_b(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  const Rational mean = mean_comparisons(n, max_n);
  return Rational(2) * b_recurrence(n, max_n) + mean - mean * mean;
}

/// Var(C_n)/n^2 in floating point.
inline double variance_ratio(std::size_t n) {
  if (n < 1) throw std::invalid_argument("variance_ratio requires n >= 1");
  const double x = static_cast<double>(n);
  const double h1 = harmonic_float(n, 1);
  const double h2 = harmonic_float(n, 2);
  const double var = 7.0 * x * x - 4.0 * (x + 1) * (x + 1) * h2 - 2.0 * (x + 1) * h1 + 13.0 * x;
  return var / (x * x);
}

inline MomentReport report(std::size_t n, std::size_t max_n = kExactGuard) {
  check_guard("exact", n, max_n);
  return MomentReport{n, mean_comparisons(n, max_n), Rational(2) * b_closed(n, max_n),
                      variance_closed(n, max_n)};
}

}  // namespace qsvar

#endif  // QSVAR_MOMENTS_HPP
