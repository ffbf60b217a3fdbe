#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "qsvar/io.hpp"
#include "qsvar/simulator.hpp"

namespace qsvar {
namespace {

TEST(SplitMix64, ReferenceVector) {
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng(), 6457827717110365317ULL);
  EXPECT_EQ(rng(), 3203168211198807973ULL);
  EXPECT_EQ(rng(), 9817491932198370423ULL);
  EXPECT_EQ(rng(), 4593380528125082431ULL);
  EXPECT_EQ(rng(), 16408922859458223821ULL);
}

TEST(SplitMix64, ChildSeedIsStreamOutput) {
  SplitMix64 parent(42);
  for (std::uint64_t t = 0; t < 16; ++t) EXPECT_EQ(child_seed(42, t), parent());
}

TEST(UniformIndex, StaysInRange) {
  SplitMix64 rng(3);
  EXPECT_THROW(uniform_index(rng, 0), std::invalid_argument);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(uniform_index(rng, bound), bound);
  }
}

TEST(UniformIndex, RoughlyUniform) {
  SplitMix64 rng(11);
  std::vector<int> counts(6);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[uniform_index(rng, 6)];
  // Each cell is Binomial(60000, 1/6): sd ~ 91.
  for (int c : counts) EXPECT_NEAR(c, draws / 6, 5 * 91);
}

TEST(Quicksort, SmallInputs) {
  SplitMix64 rng(1);
  const auto single = quicksort_count(std::vector<int>{42}, rng);
  EXPECT_EQ(single.sorted, std::vector<int>{42});
  EXPECT_EQ(single.comparisons, 0u);

  const auto empty = quicksort_count(std::vector<int>{}, rng);
  EXPECT_TRUE(empty.sorted.empty());
  EXPECT_EQ(empty.comparisons, 0u);

  for (int i = 0; i < 20; ++i) {
    const auto pair = quicksort_count(std::vector<int>{2, 1}, rng);
    EXPECT_EQ(pair.sorted, (std::vector<int>{1, 2}));
    EXPECT_EQ(pair.comparisons, 1u);
  }

  std::vector<int> three{1, 2, 3};
  do {
    for (int i = 0; i < 10; ++i) {
      const auto r = quicksort_count(three, rng);
      EXPECT_EQ(r.sorted, (std::vector<int>{1, 2, 3}));
      EXPECT_TRUE(r.comparisons == 2 || r.comparisons == 3);
    }
  } while (std::next_permutation(three.begin(), three.end()));
}

TEST(Quicksort, DuplicatesRejected) {
  SplitMix64 rng(5);
  EXPECT_THROW(quicksort_count(std::vector<int>{3, 1, 3}, rng), std::invalid_argument);
  EXPECT_THROW(quicksort_count(std::vector<int>{7, 7}, rng), std::invalid_argument);
}

TEST(Quicksort, WorksOnOtherKeyTypes) {
  SplitMix64 rng(8);
  const auto r = quicksort_count(std::vector<std::string>{"pear", "apple", "fig"}, rng);
  EXPECT_EQ(r.sorted, (std::vector<std::string>{"apple", "fig", "pear"}));
}

// Sorted output and n-1 <= count <= n(n-1)/2 on random inputs.
TEST(Quicksort, PropertySortedAndBounded) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 60);
    std::vector<long> keys(n);
    std::iota(keys.begin(), keys.end(), -30L);
    for (std::size_t i = n; i > 1; --i) std::swap(keys[i - 1], keys[uniform_index(rng, i)]);
    const auto r = quicksort_count(keys, rng);
    auto expected = keys;
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(r.sorted, expected);
    ASSERT_GE(r.comparisons + 1, n);
    ASSERT_LE(r.comparisons, n * (n - 1) / 2);
  }
}

TEST(RunTrials, Degenerate) {
  const auto one = run_trials({1, 100, 7, InputMode::identity});
  EXPECT_EQ(one.sample_mean, 0.0);
  EXPECT_EQ(one.sample_variance, 0.0);
  const auto two = run_trials({2, 100, 7, InputMode::identity});
  EXPECT_EQ(two.sample_mean, 1.0);
  EXPECT_EQ(two.sample_variance, 0.0);
  const auto zero = run_trials({0, 10, 7, InputMode::identity});
  EXPECT_EQ(zero.histogram.at(0), 10u);
  EXPECT_THROW(run_trials({5, 0, 7, InputMode::identity}), std::invalid_argument);
}

TEST(RunTrials, HistogramInvariants) {
  const SimConfig config{12, 5000, 99, InputMode::random_permutation};
  const auto stats = run_trials(config);
  std::uint64_t total = 0;
  for (const auto& [k, c] : stats.histogram) total += c;
  EXPECT_EQ(total, config.samples);
  EXPECT_GE(stats.min_k, 11u);
  EXPECT_LE(stats.max_k, 66u);
  EXPECT_LE(stats.min_k, stats.max_k);
  EXPECT_GE(stats.sample_variance, 0.0);
}

TEST(RunTrials, Deterministic) {
  const SimConfig config{30, 3000, 123, InputMode::random_permutation};
  EXPECT_EQ(run_trials(config), run_trials(config));
  auto other = config;
  other.seed = 124;
  EXPECT_NE(run_trials(config).histogram, run_trials(other).histogram);
}

TEST(RunTrials, ThreadCountDoesNotChangeResults) {
  const SimConfig config{40, 4001, 5, InputMode::identity};
  const auto serial = run_trials(config, 1);
  EXPECT_EQ(run_trials(config, 3), serial);
  EXPECT_EQ(run_trials(config, 8), serial);
}

TEST(RunTrials, MeanOfThree) {
  const auto stats = run_trials({3, 90000, 1, InputMode::identity});
  EXPECT_NEAR(stats.sample_mean, 8.0 / 3.0, 4 * std::sqrt((2.0 / 9.0) / 90000));
}

TEST(RunTrials, HistogramFractionsOfThree) {
  const std::uint64_t samples = 100000;
  const auto stats = run_trials({3, samples, 17, InputMode::identity});
  ASSERT_EQ(stats.histogram.size(), 2u);
  const double s = static_cast<double>(samples);
  for (const auto& [k, p] : {std::pair<std::uint64_t, double>{2, 1.0 / 3}, {3, 2.0 / 3}}) {
    const double frac = static_cast<double>(stats.histogram.at(k)) / s;
    EXPECT_NEAR(frac, p, 4 * std::sqrt(p * (1 - p) / s)) << k;
  }
}

TEST(RunTrials, InputModeInvariance) {
  const std::uint64_t samples = 100000;
  const auto a = run_trials({5, samples, 31, InputMode::identity});
  const auto b = run_trials({5, samples, 31, InputMode::random_permutation});
  const double se = std::sqrt(a.sample_variance / samples + b.sample_variance / samples);
  EXPECT_LE(std::fabs(a.sample_mean - b.sample_mean), 5 * se);
}

TEST(CompareToExact, Degenerate) {
  const auto z = compare_to_exact(run_trials({2, 1000, 7, InputMode::identity}));
  EXPECT_EQ(z.mean_z, 0.0);
  EXPECT_EQ(z.variance_z, 0.0);
  EXPECT_TRUE(z.pass);
}

TEST(CompareToExact, SmallN) {
  const auto z = compare_to_exact(run_trials({3, 90000, 1, InputMode::identity}));
  EXPECT_DOUBLE_EQ(z.exact_mean, 8.0 / 3.0);
  EXPECT_DOUBLE_EQ(z.exact_variance, 2.0 / 9.0);
  EXPECT_TRUE(z.pass) << z.mean_z << " " << z.variance_z;
}

TEST(CompareToExact, Hundred) {
  const auto z = compare_to_exact(run_trials({100, 100000, 1, InputMode::identity}, 4));
  EXPECT_NEAR(z.exact_mean, 647.8502585632033, 1e-9);
  EXPECT_NEAR(z.exact_variance, 3538.2666782924284, 1e-8);
  EXPECT_TRUE(z.pass) << z.mean_z << " " << z.variance_z;
}

TEST(CompareToExact, DetectsWrongLaw) {
  // Histogram of a distribution shifted by one comparison must fail the gate.
  auto stats = run_trials({20, 20000, 3, InputMode::identity});
  std::map<std::uint64_t, std::uint64_t> shifted;
  for (const auto& [k, c] : stats.histogram) shifted[k + 1] = c;
  stats.histogram = shifted;
  stats.sample_mean += 1.0;
  EXPECT_FALSE(compare_to_exact(stats).pass);
}

TEST(Serialization, StatsAndReportRoundTrip) {
  const auto stats = run_trials({25, 2000, 77, InputMode::random_permutation});
  const auto z = compare_to_exact(stats);
  const nlohmann::json js = stats;
  const nlohmann::json jz = z;
  EXPECT_EQ(nlohmann::json::parse(js.dump()).get<SampleStats>(), stats);
  EXPECT_EQ(nlohmann::json::parse(jz.dump()).get<ZReport>(), z);
}

TEST(Serialization, HistogramCsv) {
  SampleStats s;
  s.histogram = {{3, 5}, {2, 7}};
  std::ostringstream os;
  write_histogram_csv(os, s);
  EXPECT_EQ(os.str(), "k,count\n2,7\n3,5\n");
}

}  // namespace
}  // namespace qsvar
