#include <gtest/gtest.h>

#include "rpm/kmc.hpp"
#include "rpm/stationary.hpp"

using namespace rpm;
using namespace rpm::kmc;

namespace {
SimConfig timed(long L, double t, std::uint64_t seed) {
  SimConfig c;
  c.length = L;
  c.t_max = t;
  c.seed = seed;
  return c;
}
}  // namespace

TEST(Kmc, ConfigValidation) {
  SimConfig c;
  c.length = 4;
  EXPECT_THROW(c.validate(), UsageError);  // neither horizon
  c.t_max = 1.0;
  c.max_events = 5;
  EXPECT_THROW(c.validate(), UsageError);  // both
  c.max_events.reset();
  c.length = 5;
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Kmc, ZeroEvents) {
  SimConfig c;
  c.length = 4;
  c.max_events = 0;
  const auto s = simulate(c);
  EXPECT_EQ(s.counters, EventCounters{});
  EXPECT_EQ(s.elapsed_time, 0.0);
  EXPECT_FALSE(s.drift_diamond.has_value());
  EXPECT_FALSE(s.mean_peaks.has_value());
}

TEST(Kmc, Deterministic) {
  const auto a = simulate(timed(8, 2000.0, 7)), b = simulate(timed(8, 2000.0, 7));
  EXPECT_EQ(a.counters, b.counters);
  EXPECT_EQ(a.elapsed_time, b.elapsed_time);
  EXPECT_EQ(a.peak_time_integral, b.peak_time_integral);
  const auto c = simulate(timed(8, 2000.0, 8));
  EXPECT_NE(a.counters, c.counters);
}

TEST(Kmc, EventBudgetAndBalance) {
  SimConfig c;
  c.length = 6;
  c.max_events = 20000;
  c.seed = 3;
  const auto s = simulate(c);
  EXPECT_EQ(s.counters.n_total, 20000u);
  EXPECT_TRUE(s.balance_held);
  EXPECT_TRUE(s.counters.balanced());
  ASSERT_TRUE(s.drift_diamond.has_value());
  EXPECT_GE(s.drift_diamond->std_error, 0.0);
}

TEST(Kmc, ProgressRecordsAreMonotone) {
  SimConfig c = timed(4, 100.0, 1);
  c.report_every = 10.0;
  std::vector<ProgressRecord> recs;
  simulate(c, [&](const ProgressRecord& r) { recs.push_back(r); });
  ASSERT_EQ(recs.size(), 10u);
  for (std::size_t k = 1; k < recs.size(); ++k) {
    EXPECT_GT(recs[k].time, recs[k - 1].time);
    EXPECT_GE(recs[k].counters.n_total, recs[k - 1].counters.n_total);
    EXPECT_GE(recs[k].counters.n_diamond, recs[k - 1].counters.n_diamond);
  }
}

TEST(Kmc, TwoSitesHaveExactlyOnePeak) {
  const auto s = simulate(timed(2, 1000.0, 11));
  ASSERT_TRUE(s.mean_peaks.has_value());
  EXPECT_DOUBLE_EQ(s.mean_peaks->value, 1.0);
}

TEST(Kmc, SingleReplicaEnsembleMatchesSimulate) {
  const SimConfig c = timed(4, 500.0, 21);
  const auto runs = run_ensemble(c, 1);
  const auto s = simulate(c);
  EXPECT_EQ(runs[0].counters, s.counters);
  EXPECT_EQ(runs[0].peak_time_integral, s.peak_time_integral);
}

TEST(Kmc, EnsembleDeterministicAndPooledErrorShrinks) {
  const SimConfig c = timed(8, 2e4, 100);
  const auto a = run_ensemble(c, 16, 4), b = run_ensemble(c, 16, 2);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].counters, b[k].counters);
  const auto pooled = pool(a);
  double single = 0.0;
  for (const auto& r : a) single += r.drift_diamond->std_error;
  single /= static_cast<double>(a.size());
  const double ratio = single / pooled.drift_diamond->std_error;
  EXPECT_GT(ratio, 2.0);
  EXPECT_LT(ratio, 8.0);
}

class Lln : public ::testing::TestWithParam<long> {};

TEST_P(Lln, TimeAveragesWithinThreeSigma) {
  const long L = GetParam();
  const auto s = simulate(timed(L, 1e5, 2024));
  auto within = [](const std::optional<Estimate>& e, const Rational& exact) {
    return std::abs(e->value - exact.get_d()) <= 3.0 * e->std_error + 1e-12;
  };
  EXPECT_TRUE(within(s.drift_diamond, exact::diamond_drift_formula(L))) << s.drift_diamond->value;
  EXPECT_TRUE(within(s.drift_global, exact::global_drift_formula(L))) << s.drift_global->value;
  EXPECT_TRUE(within(s.mean_peaks, exact::peaks_formula(L))) << s.mean_peaks->value;
  EXPECT_TRUE(s.balance_held);
}

INSTANTIATE_TEST_SUITE_P(Lengths, Lln, ::testing::Values(2L, 4L, 6L, 8L));
