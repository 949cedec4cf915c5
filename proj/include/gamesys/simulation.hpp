#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gamesys/design.hpp"
#include "gamesys/mechanics.hpp"
#include "gamesys/metrics.hpp"

namespace gamesys {

using Rng = std::mt19937_64;

// One play-through is a single continuous online-learning run; an epoch is
// one action taken.
struct SimConfig {
  int maxEpochs = 1000;
  double learningRate = 0.1;
  double discount = 0.9;
  double explorationStart = 0.3;
  double explorationDecay = 0.995;
  double explorationFloor = 0.01;
  int minPlayableSteps = 2;
  std::uint64_t seed = 0;

  // Throws Error(InvalidConfig) when a field is out of range.
  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

enum class Termination { MaxEpochs, NoValidActions };

std::string_view termination_name(Termination reason);

struct ResourceTotals {
  double gained = 0.0;
  double lost = 0.0;
  // Paid as action costs; arrival-effect losses are in `lost`.
  double spent = 0.0;

  bool operator==(const ResourceTotals&) const = default;
};

struct PlaythroughReport {
  std::vector<std::string> statePath;
  std::vector<std::string> actionsTaken;
  std::map<std::string, int> stateCounts;
  std::map<std::string, int> actionCounts;
  std::map<std::string, ResourceTotals> resourceTotals;
  std::vector<MetricVector> perStepMetrics;
  // Weighted rewards, as fed to the learner.
  std::vector<double> perStepRewards;
  // Unit-weight rewards; rewardConsistency is computed from this stream.
  std::vector<double> perStepBaseRewards;
  double totalReward = 0.0;
  MetricVector meanMetrics;
  Termination terminationReason = Termination::NoValidActions;
  bool playable = false;
  std::uint64_t seed = 0;

  bool operator==(const PlaythroughReport&) const = default;
};

nlohmann::json report_to_json(const PlaythroughReport& report);
PlaythroughReport report_from_json(const nlohmann::json& doc);

// Metrics for one arrival. Histories cover strictly earlier steps:
// visitHistory and actionHistory are prior counts, rewardHistory is the
// unit-weight reward stream so far. `inventory` is the post-arrival
// inventory; arrivingAction is empty for the initial placement.
MetricVector compute_step_metrics(
    const GameDesign& design, std::string_view currentState,
    const Inventory& inventory, double gains, double losses,
    const std::map<std::string, int>& visitHistory,
    const std::map<std::string, int>& actionHistory,
    std::span<const double> rewardHistory,
    const std::optional<std::string>& arrivingAction = std::nullopt);

// Sum of the most recent floor(n/2) entries of an n-long reward history.
double reward_consistency(std::span<const double> rewardHistory);

using QRow = std::map<std::string, double>;
using QTable = std::map<std::string, QRow>;

// Epsilon-greedy choice among `valid`; greedy ties are broken uniformly.
// Missing Q entries read as 0. Throws Error(NoValidActions).
std::string select_action(const QRow& qRow,
                          std::span<const std::string> valid, double epsilon,
                          Rng& rng);

// Tabular update toward reward + discount * max Q(next, validNext); the max
// over an empty validNext is 0.
void q_update(QTable& q, const std::string& state, const std::string& action,
              double reward, const std::string& nextState,
              std::span<const std::string> validNext, double learningRate,
              double discount);

// Read-only view of the simulator after each arrival, for instrumentation.
struct StepView {
  std::size_t step = 0;
  const CompiledDesign* design = nullptr;
  int state = 0;
  std::span<const double> inventory;
  const MetricVector* metrics = nullptr;
};
using StepObserver = std::function<void(const StepView&)>;

// Throws ValidationFailure(InvalidDesign) or Error(InvalidConfig).
PlaythroughReport simulate(const GameDesign& design,
                           const MetricWeights& weights, const SimConfig& cfg,
                           const StepObserver& observer = {});

struct Evaluation {
  PlaythroughReport report;
  std::string summary;
};

Evaluation evaluate(const GameDesign& design, const MetricWeights& weights,
                    const SimConfig& cfg);

// Designer-facing digest of a report.
std::string render_summary(const PlaythroughReport& report,
                           std::string_view designName = {});

// Short digest used when presenting candidates for a human choice.
struct PlaythroughDigest {
  std::size_t pathLength = 0;
  std::vector<std::pair<std::string, int>> topStates;
  MetricVector meanMetrics;
  double totalReward = 0.0;
  bool playable = false;
};

PlaythroughDigest digest_of(const PlaythroughReport& report,
                            std::size_t topN = 3);
nlohmann::json digest_to_json(const PlaythroughDigest& digest);

// Episodic training of a greedy policy over a short fixed horizon. Rewards
// depend on the visit history, so the Q-table is keyed by the sequence of
// actions taken from the start state rather than by the state id alone.
struct PolicyTrainingConfig {
  int horizon = 5;
  int episodes = 4000;
  double learningRate = 0.5;
  double explorationStart = 1.0;
  double explorationEnd = 0.05;
  std::uint64_t seed = 0;
};

struct GreedyRollout {
  std::vector<std::string> actions;
  std::vector<std::string> statePath;
  // Sum of weighted rewards over every arrival, initial placement included.
  double totalReward = 0.0;
};

GreedyRollout train_finite_horizon_policy(const GameDesign& design,
                                          const MetricWeights& weights,
                                          const PolicyTrainingConfig& cfg);

}  // namespace gamesys
