#ifndef QSVAR_CLI_HPP
#define QSVAR_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsvar/errors.hpp"
#include "qsvar/exact_dist.hpp"
#include "qsvar/harmonic.hpp"
#include "qsvar/io.hpp"
#include "qsvar/moments.hpp"
#include "qsvar/simulator.hpp"

namespace qsvar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

enum class OutputFormat { json, csv, human };

inline OutputFormat parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "human") return OutputFormat::human;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

struct Guards {
  std::size_t exact = kExactGuard;
  std::size_t distribution = kDistributionGuard;
  std::size_t oracle = kOracleGuard;
};

// ---------------------------------------------------------------------------
// moments

inline int cmd_moments(std::size_t n_min, std::size_t n_max, OutputFormat format, const Guards& guards,
                       std::ostream& out, std::ostream& err) {
  if (n_min > n_max) {
    err << "moments: --from must not exceed --to\n";
    return kExitUsage;
  }
  check_guard("exact", n_max, guards.exact);

  std::vector<MomentReport> rows;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    rows.push_back(report(n, guards.exact));
    if (!rows.back().satisfies_invariants()) {
      err << "moments: invariant violated at n = " << n << "\n";
      return kExitCheckFailed;
    }
  }
  auto ratio = [](std::size_t n) { return n == 0 ? 0.0 : variance_ratio(n); };

  switch (format) {
    case OutputFormat::json: {
      auto records = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json rec = r;
        rec["mean_float"] = r.mean.to_double();
        rec["variance_float"] = r.variance.to_double();
        rec["variance_ratio"] = ratio(r.n);
        records.push_back(std::move(rec));
      }
      out << records.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << "n,mean,variance,mean_float,variance_float,variance_ratio\n";
      for (const auto& r : rows) {
        out << r.n << ',' << r.mean << ',' << r.variance << ',' << format_float(r.mean.to_double()) << ','
            << format_float(r.variance.to_double()) << ',' << format_float(ratio(r.n)) << '\n';
      }
      break;
    case OutputFormat::human:
      out << std::left << std::setw(8) << "n" << std::setw(14) << "mean" << std::setw(14) << "variance"
          << std::setw(12) << "var/n^2" << "exact mean / exact variance\n";
      for (const auto& r : rows) {
        out << std::left << std::setw(8) << r.n << std::setw(14) << format_float(r.mean.to_double())
            << std::setw(14) << format_float(r.variance.to_double()) << std::setw(12)
            << format_float(ratio(r.n)) << r.mean << " / " << r.variance << '\n';
      }
      break;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// dist

inline int cmd_dist(std::size_t n, OutputFormat format, const Guards& guards, std::ostream& out,
                    std::ostream& /*err*/) {
  const auto dist = distribution(n, guards.distribution);
  const auto m = moments_of(dist);
  switch (format) {
    case OutputFormat::json: {
      nlohmann::json j = dist;
      j["mean"] = m.mean;
      j["variance"] = m.variance;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      write_csv(out, dist);
      out << "# mean=" << m.mean << "\n# variance=" << m.variance << '\n';
      break;
    case OutputFormat::human:
      out << "P(C_" << n << " = k)\n";
      for (std::size_t k = 0; k < dist.probs.size(); ++k) {
        if (dist.probs[k].sign() == 0) continue;
        out << std::left << std::setw(8) << k << std::setw(14) << format_float(dist.probs[k].to_double())
            << dist.probs[k] << '\n';
      }
      out << "mean     = " << m.mean << " (" << format_float(m.mean.to_double()) << ")\n"
          << "variance = " << m.variance << " (" << format_float(m.variance.to_double()) << ")\n";
      break;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  Guards guards;
  /// Test hook: rewrites each closed-form identity value before comparison.
  std::function<Rational(IdentityId, std::size_t, const Rational&)> perturb_closed;
};

namespace detail {

class CheckTally {
 public:
  explicit CheckTally(std::ostream& out) : out_(out) {}

  void begin(std::string name) {
    name_ = std::move(name);
    passed_ = total_ = 0;
  }

  void record(bool ok, const std::string& where) {
    ++total_;
    if (ok) {
      ++passed_;
    } else if (!first_failure_) {
      first_failure_ = name_ + " " + where;
    }
  }

  void end() {
    out_ << std::left << std::setw(28) << name_ << passed_ << "/" << total_
         << (passed_ == total_ ? "  pass" : "  FAIL") << '\n';
  }

  const std::optional<std::string>& first_failure() const { return first_failure_; }

 private:
  std::ostream& out_;
  std::string name_;
  std::size_t passed_ = 0;
  std::size_t total_ = 0;
  std::optional<std::string> first_failure_;
};

inline std::string at(std::size_t n) { return "(n=" + std::to_string(n) + ")"; }

}  // namespace detail

inline int cmd_verify(std::size_t n_max, const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (n_max < 1) {
    err << "verify: --n-max must be >= 1\n";
    return kExitUsage;
  }
  const auto& g = options.guards;
  check_guard("exact", n_max, g.exact);
  detail::CheckTally tally(out);
  const auto means = mean_evaluator();

  for (const auto id : kAllIdentities) {
    tally.begin("identity " + to_string(id));
    for (std::size_t n = 1; n <= n_max; ++n) {
      Rational closed = closed_sum(id, n, means);
      if (options.perturb_closed) closed = options.perturb_closed(id, n, closed);
      tally.record(closed == direct_sum(id, n, means), "(" + to_string(id) + ", n=" + std::to_string(n) + ")");
    }
    tally.end();
  }

  tally.begin("b_recurrence = b_closed");
  for (std::size_t n = 0; n <= n_max; ++n) tally.record(b_recurrence(n, g.exact) == b_closed(n, g.exact), detail::at(n));
  tally.end();

  tally.begin("variance_from_b = closed");
  for (std::size_t n = 0; n <= n_max; ++n) {
    tally.record(variance_from_b(n, g.exact) == variance_closed(n, g.exact), detail::at(n));
  }
  tally.end();

  const std::size_t dist_max = std::min<std::size_t>({n_max, 25, g.distribution});
  tally.begin("distribution moments");
  for (std::size_t n = 1; n <= dist_max; ++n) {
    const auto m = moments_of(distribution(n, g.distribution));
    tally.record(m.mean == mean_comparisons(n) && m.second_factorial == Rational(2) * b_closed(n) &&
                     m.variance == variance_closed(n),
                 detail::at(n));
  }
  tally.end();

  const std::size_t pgf_max = std::min<std::size_t>({n_max, 12, g.distribution});
  tally.begin("pgf recurrence");
  for (std::size_t n = 1; n <= pgf_max; ++n) {
    for (const Rational& z : {Rational(0), Rational(1, 2), Rational(1), Rational(2)}) {
      const auto [lhs, rhs] = pgf_recurrence_check(n, z, g.distribution);
      tally.record(lhs == rhs, "(n=" + std::to_string(n) + ", z=" + z.to_string() + ")");
    }
  }
  tally.end();

  tally.begin("worst-case mass");
  for (std::size_t n = 1; n <= pgf_max; ++n) {
    const auto dist = distribution(n, g.distribution);
    const Rational expected(mpz_class(1) << static_cast<mp_bitcnt_t>(n - 1), factorial(n));
    tally.record(dist.probs.back() == expected, detail::at(n));
  }
  tally.end();

  const std::size_t oracle_max = std::min<std::size_t>({n_max, 8, g.oracle, g.distribution});
  tally.begin("permutation oracle");
  for (std::size_t n = 1; n <= oracle_max; ++n) {
    tally.record(permutation_oracle(n, g.oracle) == distribution(n, g.distribution), detail::at(n));
  }
  tally.end();

  if (tally.first_failure()) {
    out << "first failure: " << *tally.first_failure() << '\n';
    err << "verify: check failed at " << *tally.first_failure() << '\n';
    return kExitCheckFailed;
  }
  out << "all checks passed\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

inline int cmd_simulate(const SimConfig& config, OutputFormat format, unsigned threads, const Guards& guards,
                        std::ostream& out, std::ostream& /*err*/) {
  check_guard("exact", config.n, guards.exact);
  const auto stats = run_trials(config, threads);
  const auto z = compare_to_exact(stats, guards.exact);
  switch (format) {
    case OutputFormat::json:
      out << nlohmann::json{{"stats", stats}, {"report", z}}.dump(2) << '\n';
      break;
    case OutputFormat::csv:
      out << "n,samples,seed,input_mode,sample_mean,sample_variance,exact_mean,exact_variance,mean_z,"
             "variance_z,pass\n"
          << config.n << ',' << config.samples << ',' << config.seed << ',' << to_string(config.input_mode) << ','
          << format_float(stats.sample_mean) << ',' << format_float(stats.sample_variance) << ','
          << format_float(z.exact_mean) << ',' << format_float(z.exact_variance) << ',' << format_float(z.mean_z)
          << ',' << format_float(z.variance_z) << ',' << (z.pass ? "true" : "false") << "\n\n";
      write_histogram_csv(out, stats);
      break;
    case OutputFormat::human:
      out << "n = " << config.n << ", samples = " << config.samples << ", seed = " << config.seed
          << ", input = " << to_string(config.input_mode) << '\n'
          << "sample mean     " << format_float(stats.sample_mean) << "   exact " << format_float(z.exact_mean)
          << "   z = " << format_float(z.mean_z) << '\n'
          << "sample variance " << format_float(stats.sample_variance) << "   exact "
          << format_float(z.exact_variance) << "   z = " << format_float(z.variance_z) << '\n'
          << "observed range  [" << stats.min_k << ", " << stats.max_k << "]\n"
          << (z.pass ? "pass" : "FAIL") << '\n';
      break;
  }
  return z.pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// dispatch

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated comparison counts of randomized Quicksort", "qsvar"};
  app.require_subcommand(1);
  app.fallthrough();

  Guards guards;
  app.add_option("--exact-guard", guards.exact, "largest n for exact rational moments")
      ->capture_default_str();
  app.add_option("--dist-guard", guards.distribution, "largest n for exact distributions")
      ->capture_default_str();
  app.add_option("--oracle-guard", guards.oracle, "largest n for permutation enumeration")
      ->capture_default_str();

  std::string format_text = "human";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "json, csv or human")
        ->check(CLI::IsMember({"json", "csv", "human"}))
        ->capture_default_str();
  };

  std::size_t from = 0;
  std::size_t to = 0;
  auto* moments_cmd = app.add_subcommand("moments", "exact mean and variance for a range of n");
  moments_cmd->add_option("--from", from, "first n")->required();
  moments_cmd->add_option("--to", to, "last n")->required();
  add_format(moments_cmd);

  std::size_t dist_n = 0;
  auto* dist_cmd = app.add_subcommand("dist", "exact distribution of the comparison count");
  dist_cmd->add_option("--n", dist_n, "instance size")->required();
  add_format(dist_cmd);

  std::size_t verify_n = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check every identity and cross-route equality");
  verify_cmd->add_option("--n-max", verify_n, "largest n checked")->required();

  SimConfig sim;
  std::string input_mode = "identity";
  unsigned threads = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run compared against exact moments");
  sim_cmd->add_option("--n", sim.n, "instance size")->required();
  sim_cmd->add_option("--samples", sim.samples, "number of trials")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "64-bit seed")->required();
  sim_cmd->add_option("--input-mode", input_mode, "identity or random_permutation")
      ->check(CLI::IsMember({"identity", "random_permutation"}))
      ->capture_default_str();
  sim_cmd->add_option("--threads", threads, "worker threads (output does not depend on it)")
      ->capture_default_str();
  add_format(sim_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const auto format = parse_format(format_text);
    if (moments_cmd->parsed()) return cmd_moments(from, to, format, guards, out, err);
    if (dist_cmd->parsed()) return cmd_dist(dist_n, format, guards, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify_n, VerifyOptions{guards, {}}, out, err);
    sim.input_mode = parse_input_mode(input_mode);
    return cmd_simulate(sim, format, threads, guards, out, err);
  } catch (const capacity_error& e) {
    err << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qsvar::cli

#endif  // QSVAR_CLI_HPP
