#include <gtest/gtest.h>

#include "tritforge/report_io.hpp"
#include "tritforge/timing.hpp"

using namespace tritforge;

TEST(Timing, MeasurementFreeDefaults) {
  const auto b = mf_budget();
  EXPECT_EQ(b.total_ns, 525.0);
  EXPECT_EQ(b.component("Double drive qutrit reset"), 280.0);
  EXPECT_EQ(mf_budget(30, 90, 125, 80).total_ns, 325.0);
  EXPECT_EQ(mf_budget(0, 0, 0, 0).total_ns, 0.0);
}

TEST(Timing, Additivity) {
  for (double a : {0.0, 12.5, 40.0})
    for (double r : {0.0, 80.0, 333.3}) {
      const auto b = mf_budget(a, 2 * a, 3 * a, r);
      double sum = 0;
      for (const auto& c : b.components)
        if (c.relevant) sum += c.duration_ns;
      EXPECT_EQ(b.total_ns, sum);
    }
}

TEST(Timing, NegativeDurationRejected) {
  EXPECT_THROW(mf_budget(-1), InvalidBudgetError);
  EXPECT_THROW(mf_budget(30, 90, 125, -280), InvalidBudgetError);
}

TEST(Timing, MeasurementBasedPinned) {
  const auto b = mb_budget();
  EXPECT_EQ(b.total_ns, 1400.0);
  EXPECT_EQ(b.component("Latency (cable + electronics)"), 160.0);
  EXPECT_NE(naive_sum_ns(b), 1400.0);
  EXPECT_NE(b.overlap_note.find("overlap"), std::string::npos);
}

TEST(Timing, RatesAndSpeedup) {
  EXPECT_NEAR(repetition_rate(mf_budget()), 1000.0 / 525.0, 1e-12);
  EXPECT_GE(repetition_rate(mf_budget()), 1.0);
  EXPECT_NEAR(repetition_rate(mb_budget()), 1000.0 / 1400.0, 1e-12);
  TimingBudget k;
  k.total_ns = 1000;
  EXPECT_EQ(repetition_rate(k), 1.0);
  EXPECT_NEAR(speedup(), 1400.0 / 525.0, 1e-12);
  EXPECT_NEAR(speedup(mb_budget(), mf_budget(30, 90, 125, 80)), 1400.0 / 325.0, 1e-12);
  EXPECT_EQ(speedup(mb_budget(), mb_budget()), 1.0);
  EXPECT_THROW(repetition_rate(mf_budget(0, 0, 0, 0)), InvalidBudgetError);
}

TEST(Timing, JsonRoundTrip) {
  for (const auto& b : {mf_budget(), mb_budget(), mf_budget(1.0 / 3, 2.0 / 7, 125, 80)}) {
    const auto text = json(b).dump();
    EXPECT_EQ(json::parse(text).get<TimingBudget>(), b);
  }
}
