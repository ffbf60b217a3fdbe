#ifndef QSVAR_RATIONAL_HPP
#define QSVAR_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace qsvar {

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator. Backed by GMP's mpq_t.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}                  // NOLINT(google-explicit-constructor)
  Rational(unsigned long value) : value_(value) {}         // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(unsigned value) : value_(static_cast<unsigned long>(value)) {}  // NOLINT
  explicit Rational(const mpz_class& value) : value_(value) {}

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    value_.get_num() = num;
    value_.get_den() = den;
    value_.canonicalize();
  }

  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  /// Parses "num/den" or a bare integer "k". Whitespace is not accepted.
  static Rational parse(std::string_view text) {
    auto valid_integer = [](std::string_view s, bool allow_sign) {
      if (s.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
      }
      return true;
    };
    auto to_mpz = [](std::string_view s) {
      if (!s.empty() && s[0] == '+') s.remove_prefix(1);
      return mpz_class(std::string(s), 10);
    };

    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      if (!valid_integer(text, true)) {
        throw std::invalid_argument("Rational: malformed value '" + std::string(text) + "'");
      }
      return Rational(to_mpz(text));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!valid_integer(num, true) || !valid_integer(den, true)) {
      throw std::invalid_argument("Rational: malformed value '" + std::string(text) + "'");
    }
    return Rational(to_mpz(num), to_mpz(den));
  }

  const mpz_class& num() const noexcept { return value_.get_num(); }
  const mpz_class& den() const noexcept { return value_.get_den(); }
  const mpq_class& raw() const noexcept { return value_; }

  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  double to_double() const { return value_.get_d(); }

  /// "num/den", or just "num" when the denominator is 1.
  std::string to_string() const { return value_.get_str(10); }

  /// Always "num/den", including "k/1" for integers.
  std::string to_fraction_string() const {
    return num().get_str(10) + "/" + den().get_str(10);
  }

  Rational& operator+=(const Rational& rhs) {
    value_ += rhs.value_;
    return *this;
  }
  Rational& operator-=(const Rational& rhs) {
    value_ -= rhs.value_;
    return *this;
  }
  Rational& operator*=(const Rational& rhs) {
    value_ *= rhs.value_;
    return *this;
  }
  Rational& operator/=(const Rational& rhs) {
    if (rhs.value_ == 0) throw std::domain_error("Rational: division by zero");
    value_ /= rhs.value_;
    return *this;
  }

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(Rational value) {
    value.value_ = -value.value_;
    return value;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class value_;
};

/// Integer power; negative exponents invert (and so reject a zero base).
inline Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base.sign() == 0) throw std::domain_error("Rational: zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace qsvar

#endif  // QSVAR_RATIONAL_HPP
