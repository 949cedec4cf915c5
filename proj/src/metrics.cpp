#include "gamesys/metrics.hpp"

#include <cmath>

#include "gamesys/error.hpp"

namespace gamesys {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::GoalImportance: return "goalImportance";
    case Metric::StateRepetition: return "stateRepetition";
    case Metric::StateNovelty: return "stateNovelty";
    case Metric::ActionRepetition: return "actionRepetition";
    case Metric::ActionNovelty: return "actionNovelty";
    case Metric::ResourceGains: return "resourceGains";
    case Metric::ResourceLosses: return "resourceLosses";
    case Metric::RewardConsistency: return "rewardConsistency";
    case Metric::Interactivity: return "interactivity";
    case Metric::Curiosity: return "curiosity";
  }
  return "";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

bool is_penalty(Metric metric) {
  return metric == Metric::StateRepetition ||
         metric == Metric::ActionRepetition ||
         metric == Metric::ResourceLosses ||
         metric == Metric::RewardConsistency;
}

double& MetricVector::operator[](Metric metric) {
  switch (metric) {
    case Metric::GoalImportance: return goalImportance;
    case Metric::StateRepetition: return stateRepetition;
    case Metric::StateNovelty: return stateNovelty;
    case Metric::ActionRepetition: return actionRepetition;
    case Metric::ActionNovelty: return actionNovelty;
    case Metric::ResourceGains: return resourceGains;
    case Metric::ResourceLosses: return resourceLosses;
    case Metric::RewardConsistency: return rewardConsistency;
    case Metric::Interactivity: return interactivity;
    case Metric::Curiosity: return curiosity;
  }
  return curiosity;
}

double MetricVector::operator[](Metric metric) const {
  return const_cast<MetricVector&>(*this)[metric];
}

std::array<double, kMetricCount> MetricVector::values() const {
  std::array<double, kMetricCount> out{};
  for (std::size_t i = 0; i < kMetricCount; ++i) out[i] = (*this)[kAllMetrics[i]];
  return out;
}

MetricVector MetricVector::from_values(
    const std::array<double, kMetricCount>& v) {
  MetricVector out;
  for (std::size_t i = 0; i < kMetricCount; ++i) out[kAllMetrics[i]] = v[i];
  return out;
}

MetricWeights MetricWeights::uniform(double value) {
  MetricWeights w;
  w.weights_.fill(value);
  return w;
}

MetricWeights& MetricWeights::set(Metric metric, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidConfig, "metric weights must be finite");
  }
  weights_[static_cast<std::size_t>(metric)] = value;
  return *this;
}

MetricWeights& MetricWeights::set(std::string_view name, double value) {
  auto metric = metric_from_name(name);
  if (!metric) {
    throw Error(ErrorCode::UnknownMetric,
                "UNKNOWN_METRIC: '" + std::string(name) + "'");
  }
  return set(*metric, value);
}

double step_reward(const MetricVector& metrics, const MetricWeights& weights) {
  double reward = 0.0;
  for (Metric m : kAllMetrics) {
    const double term = weights[m] * metrics[m];
    reward += is_penalty(m) ? -term : term;
  }
  return reward;
}

}  // namespace gamesys
