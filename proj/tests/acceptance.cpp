// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qsvar/qsvar.hpp"

#ifndef QSVAR_CLI_PATH
#error "QSVAR_CLI_PATH must point at the qsvar executable"
#endif

namespace {

using qsvar::Rational;

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<std::string()> check;  // empty string on success, else a reason
};

std::string at(const std::string& what, std::size_t n) { return what + " mismatch at n=" + std::to_string(n); }

std::string closed_forms() {
  for (std::size_t n = 0; n <= 200; ++n) {
    if (qsvar::b_recurrence(n) != qsvar::b_closed(n)) return at("B_n", n);
    if (qsvar::variance_from_b(n) != qsvar::variance_closed(n)) return at("Var", n);
  }
  return {};
}

std::string distribution_vs_formula() {
  for (std::size_t n = 1; n <= 25; ++n) {
    const auto m = qsvar::moments_of(qsvar::distribution(n));
    if (m.mean != qsvar::mean_comparisons(n)) return at("mean", n);
    if (m.second_factorial != Rational(2) * qsvar::b_closed(n)) return at("second factorial", n);
    if (m.variance != qsvar::variance_closed(n)) return at("variance", n);
  }
  return {};
}

std::string oracle_equivalence() {
  for (std::size_t n = 1; n <= 8; ++n) {
    if (qsvar::permutation_oracle(n) != qsvar::distribution(n)) return at("distribution", n);
  }
  return {};
}

std::string identity_suite() {
  const auto means = qsvar::mean_evaluator();
  for (const auto id : qsvar::kAllIdentities) {
    for (std::size_t n = 1; n <= 500; ++n) {
      if (qsvar::closed_sum(id, n, means) != qsvar::direct_sum(id, n, means)) return at(qsvar::to_string(id), n);
    }
  }
  return {};
}

std::string spot_values() {
  if (qsvar::variance_closed(1) != Rational(0)) return "Var(C_1) != 0";
  if (qsvar::variance_closed(2) != Rational(0)) return "Var(C_2) != 0";
  if (qsvar::variance_closed(3) != Rational(2, 9)) return "Var(C_3) != 2/9";
  if (qsvar::mean_comparisons(3) != Rational(8, 3)) return "M_3 != 8/3";
  if (qsvar::b_closed(3) != Rational(7, 3) || qsvar::b_recurrence(3) != Rational(7, 3)) return "B_3 != 7/3";
  const auto d4 = qsvar::distribution(4);
  const std::vector<Rational> expected{0, 0, 0, 0, Rational(1, 2), Rational(1, 6), Rational(1, 3)};
  if (d4.probs != expected) return "distribution(4) != {4:1/2, 5:1/6, 6:1/3}";
  return {};
}

std::string worst_case_mass() {
  for (std::size_t n = 1; n <= 12; ++n) {
    const Rational expected(mpz_class(1) << static_cast<mp_bitcnt_t>(n - 1), qsvar::factorial(n));
    if (qsvar::distribution(n).probs.back() != expected) return at("probs[n(n-1)/2]", n);
  }
  return {};
}

std::string asymptotic_constant() {
  const double ratio = qsvar::variance_ratio(10'000);
  const double limit = 7.0 - 2.0 * M_PI * M_PI / 3.0;
  const double rel = std::fabs(ratio - limit) / limit;
  std::cout << "        Var(C_10000)/10000^2 = " << ratio << ", limit " << limit << ", rel diff " << rel << '\n';
  return rel <= 0.02 ? std::string{} : "relative difference " + std::to_string(rel) + " > 0.02";
}

std::string monte_carlo_gate() {
  const qsvar::SimConfig config{100, 100'000, 1, qsvar::InputMode::identity};
  const auto stats = qsvar::run_trials(config, 4);
  const auto z = qsvar::compare_to_exact(stats);
  std::cout << "        sample mean " << stats.sample_mean << " vs " << z.exact_mean << " (z=" << z.mean_z
            << "), sample variance " << stats.sample_variance << " vs " << z.exact_variance
            << " (z=" << z.variance_z << ")\n";
  if (std::fabs(z.mean_z) > 4.0) return "mean outside 4 standard errors";
  if (std::fabs(z.variance_z) > 6.0) return "variance outside 6 standard errors";
  return {};
}

std::string pgf_recurrence() {
  const std::array<Rational, 4> points{Rational(0), Rational(1, 2), Rational(1), Rational(2)};
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const auto& z : points) {
      const auto [lhs, rhs] = qsvar::pgf_recurrence_check(n, z);
      if (lhs != rhs) return at("f_n(" + z.to_string() + ")", n);
    }
  }
  return {};
}

std::string capture(const std::string& command, int& status) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  status = pclose(pipe.release());
  return out;
}

std::string cli_determinism() {
  const std::string command = std::string("\"") + QSVAR_CLI_PATH + "\" simulate --n 50 --samples 10000 --seed 9";
  int first_status = 0;
  int second_status = 0;
  const auto first = capture(command, first_status);
  const auto second = capture(command, second_status);
  if (first.empty()) return "no output from " + command;
  if (first_status != second_status) return "exit statuses differ";
  return first == second ? std::string{} : "outputs differ";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form consistency, 0 <= n <= 200", 30, closed_forms},
      {2, "distribution moments = closed forms, 1 <= n <= 25", 60, distribution_vs_formula},
      {3, "distribution = permutation oracle, 1 <= n <= 8", 60, oracle_equivalence},
      {4, "identities I1-I11 closed = direct, 1 <= n <= 500", 60, identity_suite},
      {5, "spot values", 5, spot_values},
      {6, "worst-case mass 2^(n-1)/n!, 1 <= n <= 12", 5, worst_case_mass},
      {7, "Var/n^2 within 2% of 7 - 2pi^2/3 at n = 10^4", 5, asymptotic_constant},
      {8, "Monte Carlo gate, n = 100, 10^5 samples, seed 1", 60, monte_carlo_gate},
      {9, "pgf recurrence, n <= 12, z in {0, 1/2, 1, 2}", 10, pgf_recurrence},
      {10, "simulate output byte-identical across runs", 30, cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = c.check();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (reason.empty() && seconds > c.budget_seconds) {
      reason = "took " + std::to_string(seconds) + " s, budget " + std::to_string(c.budget_seconds) + " s";
    }
    const bool ok = reason.empty();
    failures += ok ? 0 : 1;
    std::printf("[%s] AC%-2d %-52s %7.2f s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                ok ? "" : "  ", reason.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
