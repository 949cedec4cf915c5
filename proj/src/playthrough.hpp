#pragma once

#include <span>
#include <vector>

#include "gamesys/mechanics.hpp"
#include "gamesys/metrics.hpp"
#include "gamesys/simulation.hpp"

namespace gamesys::detail {

// Metric values for an arrival at state s. `arrivingAction` is -1 for the
// initial placement; visits and uses are counts strictly before this step.
MetricVector measure_step(const CompiledDesign& design, int s,
                          int arrivingAction, CompiledDesign::Arrival arrival,
                          std::span<const int> visits, std::span<const int> uses,
                          double consistency, std::size_t availableCount);

// Mechanics and bookkeeping for one run from the start state with a zero
// inventory. The caller decides which action to take.
class Playthrough {
 public:
  // With trackResources, per-resource gained/lost/spent tallies are kept.
  Playthrough(const CompiledDesign& design, const MetricWeights& weights,
              bool trackResources = false);

  int state() const { return state_; }
  std::size_t steps_taken() const { return steps_; }
  std::span<const int> valid() const { return valid_; }
  std::span<const double> inventory() const { return inventory_; }
  const MetricVector& metrics() const { return metrics_; }
  double reward() const { return reward_; }
  double base_reward() const { return base_reward_; }
  std::span<const int> visits() const { return visits_; }
  std::span<const int> uses() const { return uses_; }

  // Pays for `action`, moves along its transition and scores the arrival.
  // Precondition: action is in valid().
  void step(int action);

  std::span<const double> gained() const { return gained_; }
  std::span<const double> lost() const { return lost_; }
  std::span<const double> spent() const { return spent_; }

 private:
  void arrive(int action);

  const CompiledDesign& design_;
  const MetricWeights& weights_;
  int state_ = 0;
  std::size_t steps_ = 0;
  std::vector<double> inventory_;
  std::vector<int> visits_;
  std::vector<int> uses_;
  std::vector<int> valid_;
  // Unit-weight reward stream.
  std::vector<double> base_rewards_;
  MetricVector metrics_;
  double reward_ = 0.0;
  double base_reward_ = 0.0;
  bool tracking_ = false;
  std::vector<double> gained_;
  std::vector<double> lost_;
  std::vector<double> spent_;
};

}  // namespace gamesys::detail
