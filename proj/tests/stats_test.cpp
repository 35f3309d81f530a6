#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "tarlab/stats.hpp"
#include "test_util.hpp"

using namespace tarlab;

TEST_CASE("relative_cost_reduction") {
  CHECK(relative_cost_reduction(60, 100) == doctest::Approx(0.4));
  CHECK(relative_cost_reduction(100, 100) == 0.0);
  CHECK(relative_cost_reduction(150, 100) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(relative_cost_reduction(1, 0), std::invalid_argument);
}

TEST_CASE("ks_two_sample on fixed cases") {
  const auto same = ks_two_sample({1, 2, 3}, {1, 2, 3});
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  CHECK(ks_two_sample({1, 2}, {3, 4}).statistic == 1.0);
  CHECK(ks_two_sample({1, 3}, {2, 4}).statistic == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("ks D matches a full enumeration oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs, ys;
    const int m = 1 + static_cast<int>(rng() % 12);
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < m; ++i) xs.push_back(static_cast<double>(rng() % 10));
    for (int i = 0; i < n; ++i) ys.push_back(static_cast<double>(rng() % 10));

    double oracle = 0.0;
    auto cdf = [](const std::vector<double>& v, double t) {
      long c = 0;
      for (double x : v) c += x <= t ? 1 : 0;
      return static_cast<double>(c) / static_cast<double>(v.size());
    };
    for (double t : xs) oracle = std::max(oracle, std::abs(cdf(xs, t) - cdf(ys, t)));
    for (double t : ys) oracle = std::max(oracle, std::abs(cdf(xs, t) - cdf(ys, t)));

    CHECK(ks_two_sample(xs, ys).statistic == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("ks D ignores strictly monotone transforms") {
  std::mt19937_64 rng(29);
  std::vector<double> xs, ys;
  for (int i = 0; i < 25; ++i) xs.push_back(static_cast<double>(rng() % 1000));
  for (int i = 0; i < 30; ++i) ys.push_back(static_cast<double>(rng() % 1000) + 100.0);
  const double d = ks_two_sample(xs, ys).statistic;
  auto transform = [](std::vector<double> v) {
    for (auto& x : v) x = std::exp(x / 200.0);
    return v;
  };
  CHECK(ks_two_sample(transform(xs), transform(ys)).statistic == doctest::Approx(d));
}

TEST_CASE("bonferroni caps at one") {
  CHECK(bonferroni(0.01, 84) == doctest::Approx(0.84));
  CHECK(bonferroni(0.2, 1) == doctest::Approx(0.2));
  CHECK(bonferroni(0.5, 3) == 1.0);
  CHECK_THROWS_AS(bonferroni(-0.1, 2), std::invalid_argument);
}

TEST_CASE("r_precision counts positives in the top R") {
  CHECK(r_precision({true, true, true, false, false}, 3) == 1.0);
  CHECK(r_precision({false, false, true, true}, 2) == 0.0);
  CHECK(r_precision({true, false, true, false}, 4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(r_precision({true}, 0), std::invalid_argument);
  // permutations below rank R change nothing
  CHECK(r_precision({true, false, false, true, false}, 2) ==
        r_precision({true, false, true, false, false}, 2));
}

TEST_CASE("bin boundaries are left-closed and exhaustive") {
  CHECK(prevalence_bin_for(499) == PrevalenceBin::kTooRare);
  CHECK(prevalence_bin_for(500) == PrevalenceBin::kRare);
  CHECK(prevalence_bin_for(1000) == PrevalenceBin::kRare);
  CHECK(prevalence_bin_for(2000) == PrevalenceBin::kMedium);
  CHECK(prevalence_bin_for(8000) == PrevalenceBin::kCommon);
  CHECK(prevalence_bin_for(32000) == PrevalenceBin::kTooCommon);
  CHECK(prevalence_bin_for(32001) == PrevalenceBin::kTooCommon);

  CHECK(difficulty_bin_for(0.649) == DifficultyBin::kHard);
  CHECK(difficulty_bin_for(0.65) == DifficultyBin::kMedium);
  CHECK(difficulty_bin_for(0.85) == DifficultyBin::kEasy);
  CHECK(difficulty_bin_for(0.851) == DifficultyBin::kEasy);
  CHECK(difficulty_bin_for(0.9) == DifficultyBin::kEasy);
  CHECK(difficulty_bin_for(1.0) == DifficultyBin::kEasy);

  // exhaustive over a sweep
  for (long c = 0; c < 40000; c += 37) (void)prevalence_bin_for(c);
  for (double s = 0.0; s <= 1.0; s += 0.001) (void)difficulty_bin_for(s);
}

TEST_CASE("assign_bins is deterministic on the synthetic corpus") {
  const Corpus corpus = testutil::make_synthetic_corpus(400, 0.2);
  const BinAssignment a = assign_bins(corpus, "topic", 3);
  const BinAssignment b = assign_bins(corpus, "topic", 3);
  CHECK(a.r_precision == b.r_precision);
  CHECK(a.prevalence_bin == PrevalenceBin::kTooRare);  // 80 positives
  CHECK(a.r_precision >= 0.0);
  CHECK(a.r_precision <= 1.0);
  CHECK_THROWS_AS(assign_bins(corpus, "nope", 3), std::runtime_error);
}

TEST_CASE("compare_workflows aggregates paired reductions") {
  const std::vector<double> base = {100, 200, 300};
  const std::vector<double> cheaper = {60, 120, 180};
  const ComparisonResult uniform_gain = compare_workflows(cheaper, base, 1);
  CHECK(uniform_gain.mean_reduction == doctest::Approx(0.4));

  const ComparisonResult same = compare_workflows(base, base, 84);
  CHECK(same.mean_reduction == 0.0);
  CHECK(!same.significant_at.has_value());

  std::vector<double> low(50), high(50);
  for (int i = 0; i < 50; ++i) {
    low[i] = static_cast<double>(i);
    high[i] = 1000.0 + static_cast<double>(i);
  }
  const ComparisonResult separated = compare_workflows(low, high, 84);
  CHECK(separated.ks_statistic == 1.0);
  CHECK(separated.significant_at.has_value());

  CHECK_THROWS_AS(compare_workflows({1.0}, {1.0, 2.0}, 1), std::invalid_argument);
}

TEST_CASE("the reduction formula is intentionally asymmetric") {
  const double ab = relative_cost_reduction(60, 100);
  const double ba = relative_cost_reduction(100, 60);
  CHECK(ab != doctest::Approx(-ba));
}
