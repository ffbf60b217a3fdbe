#ifndef QSVAR_HARMONIC_HPP
#define QSVAR_HARMONIC_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsvar/rational.hpp"

namespace qsvar {

/// Memoized generalized harmonic numbers H_n^(k) = sum_{j=1}^n 1/j^k, with
/// H_0^(k) = 0 for every order. Rows grow on demand; an entry is never
/// rewritten once stored. Concurrent readers share a lock, growth takes it
/// exclusively, so racing first computations of the same entry are harmless.
class HarmonicTable {
 public:
  Rational get(std::size_t n, unsigned order) const {
    if (order == 0) throw std::invalid_argument("harmonic order must be >= 1");
    {
      std::shared_lock lock(mutex_);
      auto it = rows_.find(order);
      if (it != rows_.end() && n < it->second.size()) return it->second[n];
    }
    std::unique_lock lock(mutex_);
    auto& row = rows_[order];
    if (row.empty()) row.emplace_back(0);
    while (row.size() <= n) {
      const auto j = static_cast<unsigned long>(row.size());
      mpz_class power;
      mpz_ui_pow_ui(power.get_mpz_t(), j, order);
      row.push_back(row.back() + Rational(mpz_class(1), power));
    }
    return row[n];
  }

  /// Largest n currently stored for the given order (0 if the row is empty).
  std::size_t max_n(unsigned order) const {
    std::shared_lock lock(mutex_);
    auto it = rows_.find(order);
    return (it == rows_.end() || it->second.empty()) ? 0 : it->second.size() - 1;
  }

 private:
  mutable std::shared_mutex mutex_;
  mutable std::map<unsigned, std::vector<Rational>> rows_;
};

inline HarmonicTable& harmonic_table() {
  static HarmonicTable table;
  return table;
}

inline Rational harmonic(std::size_t n) { return harmonic_table().get(n, 1); }

inline Rational harmonic_order(std::size_t n, unsigned k) { return harmonic_table().get(n, k); }

/// Floating-point H_n^(k), summed in ascending j with Neumaier compensation.
inline double harmonic_float(std::size_t n, unsigned k) {
  if (k == 0) throw std::invalid_argument("harmonic order must be >= 1");
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double x = static_cast<double>(j);
    const double term = k == 1 ? 1.0 / x : k == 2 ? 1.0 / (x * x) : std::pow(x, -static_cast<double>(k));
    const double t = sum + term;
    carry += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

// ---------------------------------------------------------------------------
// Identity registry.
//
// Each identity has a closed (right-hand) side and a direct (left-hand) side.
// The direct side is a literal term-by-term sum and acts as the oracle.
//
//   I1   sum_{j=1}^n j H_{j-1}            = n(n+1)H_{n+1}/2 - n(n+5)/4
//   I2   sum_{j=1}^n M_{j-1}              = n(n+1)H_{n+1} - (5n^2+n)/2
//   I3   sum_{j=1}^n j^2 H_{j-1}          = [6n(n+1)(2n+1)H_{n+1} - n(n+1)(4n+23)]/36
//   I4   sum_{j=1}^n j(n-j+1)H_{n-j}      = [6nH_{n+1}(n^2+3n+2) - 5n^3 - 27n^2 - 22n]/36
//   I5   sum_{j=1}^n H_j                  = (n+1)H_n - n
//   I6   sum_{j=1}^n H_{n+1-j}/j          = H_{n+1}^2 - H_{n+1}^(2)
//   I7   sum_{i=1}^n H_i H_{n+1-i}        = (n+2)(H_{n+1}^2 - H_{n+1}^(2)) - 2(n+1)(H_{n+1}-1)
//   I8   2 sum_{j=1}^n H_j/(j+1)          = H_{n+1}^2 - H_{n+1}^(2)
//   I9   sum_{i=1}^n H_i H_{n-i}          = (n+1)[(H_{n+1}^2 - H_{n+1}^(2)) - 2(H_{n+1}-1)]
//   I10  sum_{j=1}^n j H_{j-1} H_{n+1-j}  = C(n+2,2)[(H_{n+1}^2 - H_{n+1}^(2)) - 2(H_{n+1}-1)]
//   I11  sum_{j=1}^n M_{j-1} M_{n-j}      = 4 sum_{j=1}^n jH_{j-1}(n-j+1)H_{n-j}
//                                           - (8/3)n(n^2-1)H_{n+1} + (44n/9)(n^2-1)
//
// M_j is the mean comparison count, supplied by the caller so this header
// does not depend on the moments module.
// ---------------------------------------------------------------------------

enum class IdentityId { I1 = 1, I2, I3, I4, I5, I6, I7, I8, I9, I10, I11 };

inline constexpr std::array<IdentityId, 11> kAllIdentities = {
    IdentityId::I1, IdentityId::I2, IdentityId::I3, IdentityId::I4,  IdentityId::I5, IdentityId::I6,
    IdentityId::I7, IdentityId::I8, IdentityId::I9, IdentityId::I10, IdentityId::I11};

using MeanEvaluator = std::function<Rational(std::size_t)>;

inline std::string to_string(IdentityId id) {
  const int tag = static_cast<int>(id);
  if (tag < 1 || tag > 11) throw std::invalid_argument("unknown identity tag " + std::to_string(tag));
  return "I" + std::to_string(tag);
}

inline IdentityId parse_identity(std::string_view text) {
  for (const auto id : kAllIdentities) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown identity tag '" + std::string(text) + "'");
}

/// True when the direct side needs mean comparison counts.
inline bool needs_means(IdentityId id) { return id == IdentityId::I2 || id == IdentityId::I11; }

namespace detail {

inline Rational q(std::size_t n) { return Rational(static_cast<unsigned long>(n)); }

// H_{n+1}^2 - H_{n+1}^(2), shared by several closed forms.
inline Rational square_gap(std::size_t m) {
  const Rational h = harmonic(m);
  return h * h - harmonic_order(m, 2);
}

inline void check_n(std::size_t n) {
  if (n < 1) throw std::invalid_argument("identity evaluation requires n >= 1");
}

inline const MeanEvaluator& require_means(IdentityId id, const MeanEvaluator& mean) {
  if (!mean) throw std::invalid_argument(to_string(id) + " requires a mean evaluator");
  return mean;
}

// sum_{j=1}^n j H_{j-1} (n-j+1) H_{n-j}, the inner sum of I11's closed side.
inline Rational weighted_cross_sum(std::size_t n) {
  Rational sum;
  for (std::size_t j = 1; j <= n; ++j) {
    sum += q(j) * harmonic(j - 1) * q(n - j + 1) * harmonic(n - j);
  }
  return sum;
}

}  // namespace detail

/// Right-hand (closed) side of identity `id` at n.
inline Rational closed_sum(IdentityId id, std::size_t n, const MeanEvaluator& mean = {}) {
  (void)mean;
  detail::check_n(n);
  using detail::q;
  const Rational N = q(n);
  const Rational h1 = harmonic(n + 1);
  switch (id) {
    case IdentityId::I1:
      return N * (N + 1) * h1 / 2 - N * (N + 5) / 4;
    case IdentityId::I2:
      return N * (N + 1) * h1 - (Rational(5) * N * N + N) / 2;
    case IdentityId::I3:
      return (Rational(6) * N * (N + 1) * (Rational(2) * N + 1) * h1 -
              N * (N + 1) * (Rational(4) * N + 23)) /
             36;
    case IdentityId::I4:
      return (Rational(6) * N * h1 * (N * N + Rational(3) * N + 2) - Rational(5) * N * N * N -
              Rational(27) * N * N - Rational(22) * N) /
             36;
    case IdentityId::I5:
      return (N + 1) * harmonic(n) - N;
    case IdentityId::I6:
    case IdentityId::I8:
      return detail::square_gap(n + 1);
    case IdentityId::I7:
      return (N + 2) * detail::square_gap(n + 1) - Rational(2) * (N + 1) * (h1 - 1);
    case IdentityId::I9:
      return (N + 1) * (detail::square_gap(n + 1) - Rational(2) * (h1 - 1));
    case IdentityId::I10:
      return Rational(binomial(n + 2, 2)) * (detail::square_gap(n + 1) - Rational(2) * (h1 - 1));
    case IdentityId::I11:
      return Rational(4) * detail::weighted_cross_sum(n) -
             Rational(8, 3) * N * (N * N - 1) * h1 + Rational(44, 9) * N * (N * N - 1);
  }
  throw std::invalid_argument("unknown identity tag " + std::to_string(static_cast<int>(id)));
}

/// Left-hand side of identity `id` at n, summed term by term.
inline Rational direct_sum(IdentityId id, std::size_t n, const MeanEvaluator& mean = {}) {
  detail::check_n(n);
  using detail::q;
  Rational sum;
  switch (id) {
    case IdentityId::I1:
      for (std::size_t j = 1; j <= n; ++j) sum += q(j) * harmonic(j - 1);
      return sum;
    case IdentityId::I2: {
      const auto& m = detail::require_means(id, mean);
      for (std::size_t j = 1; j <= n; ++j) sum += m(j - 1);
      return sum;
    }
    case IdentityId::I3:
      for (std::size_t j = 1; j <= n; ++j) sum += q(j) * q(j) * harmonic(j - 1);
      return sum;
    case IdentityId::I4:
      for (std::size_t j = 1; j <= n; ++j) sum += q(j) * q(n - j + 1) * harmonic(n - j);
      return sum;
    case IdentityId::I5:
      for (std::size_t j = 1; j <= n; ++j) sum += harmonic(j);
      return sum;
    case IdentityId::I6:
      for (std::size_t j = 1; j <= n; ++j) sum += harmonic(n + 1 - j) / q(j);
      return sum;
    case IdentityId::I7:
      for (std::size_t i = 1; i <= n; ++i) sum += harmonic(i) * harmonic(n + 1 - i);
      return sum;
    case IdentityId::I8:
      for (std::size_t j = 1; j <= n; ++j) sum += harmonic(j) / q(j + 1);
      return Rational(2) * sum;
    case IdentityId::I9:
      for (std::size_t i = 1; i <= n; ++i) sum += harmonic(i) * harmonic(n - i);
      return sum;
    case IdentityId::I10:
      for (std::size_t j = 1; j <= n; ++j) sum += q(j) * harmonic(j - 1) * harmonic(n + 1 - j);
      return sum;
    case IdentityId::I11: {
      const auto& m = detail::require_means(id, mean);
      for (std::size_t j = 1; j <= n; ++j) sum += m(j - 1) * m(n - j);
      return sum;
    }
  }
  throw std::invalid_argument("unknown identity tag " + std::to_string(static_cast<int>(id)));
}

/// The middle member of I6: 2 sum_{k=1}^n H_k/(k+1).
inline Rational i6_middle(std::size_t n) {
  Rational sum;
  for (std::size_t k = 1; k <= n; ++k) sum += harmonic(k) / detail::q(k + 1);
  return Rational(2) * sum;
}

}  // namespace qsvar

#endif  // QSVAR_HARMONIC_HPP
