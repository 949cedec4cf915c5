#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace gamesys {

// The ten per-step player metrics, in the fixed export order.
enum class Metric {
  GoalImportance,
  StateRepetition,
  StateNovelty,
  ActionRepetition,
  ActionNovelty,
  ResourceGains,
  ResourceLosses,
  RewardConsistency,
  Interactivity,
  Curiosity,
};

inline constexpr std::size_t kMetricCount = 10;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::GoalImportance,   Metric::StateRepetition,
    Metric::StateNovelty,     Metric::ActionRepetition,
    Metric::ActionNovelty,    Metric::ResourceGains,
    Metric::ResourceLosses,   Metric::RewardConsistency,
    Metric::Interactivity,    Metric::Curiosity};

// camelCase wire name, e.g. "resourceGains".
std::string_view metric_name(Metric metric);
std::optional<Metric> metric_from_name(std::string_view name);

// Penalty metrics are subtracted from the reward: stateRepetition,
// actionRepetition, resourceLosses and rewardConsistency.
bool is_penalty(Metric metric);

struct MetricVector {
  double goalImportance = 0.0;
  double stateRepetition = 0.0;
  double stateNovelty = 0.0;
  double actionRepetition = 0.0;
  double actionNovelty = 0.0;
  double resourceGains = 0.0;
  double resourceLosses = 0.0;
  double rewardConsistency = 0.0;
  double interactivity = 0.0;
  double curiosity = 0.0;

  double& operator[](Metric metric);
  double operator[](Metric metric) const;
  std::array<double, kMetricCount> values() const;
  static MetricVector from_values(const std::array<double, kMetricCount>& v);

  bool operator==(const MetricVector&) const = default;
};

// One multiplier per metric; negative and zero weights are allowed.
class MetricWeights {
 public:
  MetricWeights() { weights_.fill(1.0); }

  static MetricWeights uniform(double value);

  double operator[](Metric metric) const {
    return weights_[static_cast<std::size_t>(metric)];
  }
  MetricWeights& set(Metric metric, double value);
  // Throws Error(UnknownMetric) for names outside the ten metrics and
  // Error(InvalidConfig) for non-finite values.
  MetricWeights& set(std::string_view name, double value);

  const std::array<double, kMetricCount>& values() const { return weights_; }
  bool operator==(const MetricWeights&) const = default;

 private:
  std::array<double, kMetricCount> weights_;
};

// Sum of weighted reward metrics minus sum of weighted penalty metrics.
double step_reward(const MetricVector& metrics, const MetricWeights& weights);

}  // namespace gamesys
