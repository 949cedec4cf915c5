#include "playthrough.hpp"

namespace gamesys::detail {

MetricVector measure_step(const CompiledDesign& design, int s,
                          int arrivingAction, CompiledDesign::Arrival arrival,
                          std::span<const int> visits, std::span<const int> uses,
                          double consistency, std::size_t availableCount) {
  MetricVector m;
  m.goalImportance = design.importance(s);
  m.stateRepetition = visits[s];
  m.stateNovelty = visits[s] == 0 ? 1.0 : 0.0;
  if (arrivingAction >= 0) {
    m.actionRepetition = uses[arrivingAction];
    m.actionNovelty = uses[arrivingAction] == 0 ? 1.0 : 0.0;
  }
  m.resourceGains = arrival.gains;
  m.resourceLosses = arrival.losses;
  m.rewardConsistency = consistency;
  m.interactivity = static_cast<double>(availableCount);
  int unvisited = 0;
  for (int next : design.successors(s)) {
    if (next != s && visits[next] == 0) ++unvisited;
  }
  m.curiosity = unvisited;
  return m;
}

Playthrough::Playthrough(const CompiledDesign& design,
                         const MetricWeights& weights, bool trackResources)
    : design_(design),
      weights_(weights),
      state_(design.start_state()),
      inventory_(design.resource_count(), 0.0),
      visits_(design.state_count(), 0),
      uses_(design.action_count(), 0),
      tracking_(trackResources) {
  if (tracking_) {
    gained_.assign(design_.resource_count(), 0.0);
    lost_.assign(design_.resource_count(), 0.0);
    spent_.assign(design_.resource_count(), 0.0);
  }
  arrive(-1);
}

void Playthrough::step(int action) {
  if (tracking_) {
    for (const auto& cost : design_.costs(action)) {
      spent_[cost.resource] += cost.amount;
    }
  }
  design_.pay(action, inventory_);
  state_ = design_.transition(state_, action);
  ++steps_;
  arrive(action);
}

void Playthrough::arrive(int action) {
  const auto arrival =
      tracking_ ? design_.arrive(state_, inventory_, gained_, lost_)
                : design_.arrive(state_, inventory_);
  design_.available_actions(state_, inventory_, valid_);

  const double consistency = reward_consistency(base_rewards_);

  metrics_ = measure_step(design_, state_, action, arrival, visits_, uses_,
                          consistency, valid_.size());
  base_reward_ = step_reward(metrics_, MetricWeights{});
  reward_ = step_reward(metrics_, weights_);
  base_rewards_.push_back(base_reward_);
  ++visits_[state_];
  if (action >= 0) ++uses_[action];
}

}  // namespace gamesys::detail
