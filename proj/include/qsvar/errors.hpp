#ifndef QSVAR_ERRORS_HPP
#define QSVAR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsvar {

// Default size guards. All of them can be raised per call.
inline constexpr std::size_t kExactGuard = 10'000;
inline constexpr std::size_t kDistributionGuard = 64;
inline constexpr std::size_t kOracleGuard = 9;

/// Thrown when an instance size exceeds one of the configured guards.
class capacity_error : public std::length_error {
 public:
  capacity_error(const std::string& guard_name, std::size_t n, std::size_t limit)
      : std::length_error(guard_name + " guard exceeded: n = " + std::to_string(n) +
                          " > " + std::to_string(limit)),
        n_(n),
        limit_(limit) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t n_;
  std::size_t limit_;
};

inline void check_guard(const char* guard_name, std::size_t n, std::size_t limit) {
  if (n > limit) throw capacity_error(guard_name, n, limit);
}

}  // namespace qsvar

#endif  // QSVAR_ERRORS_HPP
