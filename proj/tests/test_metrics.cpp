#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gamesys/error.hpp"
#include "gamesys/metrics.hpp"

namespace gamesys {
namespace {

MetricVector sample_metrics() {
  MetricVector m;
  m.goalImportance = 5;
  m.stateNovelty = 1;
  m.actionNovelty = 1;
  m.resourceGains = 10;
  m.interactivity = 2;
  m.curiosity = 1;
  return m;
}

TEST(StepReward, UnitWeights) {
  EXPECT_DOUBLE_EQ(step_reward(sample_metrics(), MetricWeights{}), 20.0);
}

TEST(StepReward, MultiplierOnSingleMetric) {
  MetricWeights w = MetricWeights::uniform(0.0);
  w.set(Metric::ResourceGains, -100);
  EXPECT_DOUBLE_EQ(step_reward(sample_metrics(), w), -1000.0);
}

TEST(StepReward, ZeroWeights) {
  MetricVector m = sample_metrics();
  m.stateRepetition = 4;
  m.rewardConsistency = 17;
  EXPECT_EQ(step_reward(m, MetricWeights::uniform(0.0)), 0.0);
}

TEST(StepReward, PenaltiesSubtract) {
  for (Metric metric : kAllMetrics) {
    MetricVector m;
    m[metric] = 3.0;
    const double expected = is_penalty(metric) ? -6.0 : 6.0;
    EXPECT_DOUBLE_EQ(step_reward(m, MetricWeights::uniform(2.0)), expected)
        << metric_name(metric);
  }
}

TEST(Metrics, PenaltySet) {
  std::vector<std::string> penalties;
  for (Metric metric : kAllMetrics) {
    if (is_penalty(metric)) penalties.emplace_back(metric_name(metric));
  }
  EXPECT_EQ(penalties,
            (std::vector<std::string>{"stateRepetition", "actionRepetition",
                                      "resourceLosses", "rewardConsistency"}));
}

TEST(Metrics, NamesRoundTrip) {
  ASSERT_EQ(kAllMetrics.size(), 10u);
  EXPECT_EQ(metric_name(kAllMetrics.front()), "goalImportance");
  EXPECT_EQ(metric_name(kAllMetrics.back()), "curiosity");
  for (Metric metric : kAllMetrics) {
    EXPECT_EQ(metric_from_name(metric_name(metric)), metric);
  }
  EXPECT_FALSE(metric_from_name("fun").has_value());
}

TEST(MetricWeights, RejectsUnknownAndNonFinite) {
  MetricWeights w;
  try {
    w.set("fun", 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownMetric);
  }
  try {
    w.set("curiosity", std::numeric_limits<double>::infinity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  w.set("curiosity", -100);
  EXPECT_EQ(w[Metric::Curiosity], -100.0);
}

TEST(MetricVector, ValuesFollowFixedOrder) {
  MetricVector m = sample_metrics();
  const auto values = m.values();
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    EXPECT_EQ(values[i], m[kAllMetrics[i]]);
  }
  EXPECT_EQ(MetricVector::from_values(values), m);
}

}  // namespace
}  // namespace gamesys
