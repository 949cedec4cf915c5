#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gamesys/design.hpp"

namespace gamesys {

// Resource amounts carried by the player, keyed by resource id.
struct Inventory {
  std::map<std::string, double> amounts;

  // All-zero inventory covering exactly the design's resources.
  static Inventory empty_for(const GameDesign& design);

  double operator[](const std::string& resource) const;
  bool operator==(const Inventory&) const = default;
};

struct ArrivalOutcome {
  Inventory inventory;
  double gains = 0.0;
  double losses = 0.0;
};

// Actions with a transition out of `state` whose every cost the inventory
// covers, sorted by id. Throws Error(UnknownState).
std::vector<std::string> available_actions(const GameDesign& design,
                                           std::string_view state,
                                           const Inventory& inventory);

// Pays the action's costs. Throws Error(UnknownAction) or
// Error(Unaffordable).
Inventory apply_action_cost(const GameDesign& design, std::string_view action,
                            const Inventory& inventory);

// Fires the state's taps, then drains, then converters. Gains and losses are
// the amounts actually moved after clamping to [0, capacity]. Throws
// Error(UnknownState).
ArrivalOutcome apply_arrival_effects(const GameDesign& design,
                                     std::string_view state,
                                     const Inventory& inventory);

// Index-based form of a valid design used by the simulator's inner loop.
// States, actions and resources are indexed in id order, so iterating action
// indices visits actions sorted by id. Attachments fire in canonical order,
// which makes simulation independent of list order in the source design.
class CompiledDesign {
 public:
  struct Flow {
    int resource;
    double amount;
  };
  struct Converter {
    int from;
    double fromAmount;
    int to;
    double toAmount;
  };
  struct Arrival {
    double gains = 0.0;
    double losses = 0.0;
  };

  // Throws ValidationFailure(InvalidDesign) for invalid designs.
  explicit CompiledDesign(const GameDesign& design);

  int state_count() const { return static_cast<int>(state_ids_.size()); }
  int action_count() const { return static_cast<int>(action_ids_.size()); }
  int resource_count() const { return static_cast<int>(resource_ids_.size()); }
  int start_state() const { return start_; }

  const std::string& state_id(int s) const { return state_ids_[s]; }
  const std::string& action_id(int a) const { return action_ids_[a]; }
  const std::string& resource_id(int r) const { return resource_ids_[r]; }
  std::optional<int> state_index(std::string_view id) const;
  std::optional<int> action_index(std::string_view id) const;
  std::optional<int> resource_index(std::string_view id) const;

  double importance(int s) const { return importance_[s]; }
  double capacity(int r) const { return capacity_[r]; }
  // Destination of (s, a), or -1 when no transition exists.
  int transition(int s, int a) const { return next_[s * action_count() + a]; }
  // Distinct destination states one transition away from s.
  std::span<const int> successors(int s) const { return successors_[s]; }
  // (action, destination) pairs out of s, by action index.
  std::span<const std::pair<int, int>> outgoing(int s) const {
    return outgoing_[s];
  }

  bool affordable(int a, std::span<const double> inventory) const;
  void available_actions(int s, std::span<const double> inventory,
                         std::vector<int>& out) const;
  // Precondition: affordable(a, inventory).
  void pay(int a, std::span<double> inventory) const;
  std::span<const Flow> costs(int a) const { return costs_[a]; }

  // Per-resource tallies are accumulated when the spans are non-empty.
  Arrival arrive(int s, std::span<double> inventory,
                 std::span<double> gained_by_resource = {},
                 std::span<double> lost_by_resource = {}) const;

  std::vector<double> to_vector(const Inventory& inventory) const;
  Inventory to_inventory(std::span<const double> amounts) const;

 private:
  std::vector<std::string> state_ids_;
  std::vector<std::string> action_ids_;
  std::vector<std::string> resource_ids_;
  int start_ = 0;
  std::vector<double> importance_;
  std::vector<double> capacity_;
  std::vector<int> next_;
  std::vector<std::vector<int>> successors_;
  std::vector<std::vector<std::pair<int, int>>> outgoing_;
  std::vector<std::vector<Flow>> costs_;
  std::vector<std::vector<Flow>> taps_;
  std::vector<std::vector<Flow>> drains_;
  std::vector<std::vector<Converter>> converters_;
};

}  // namespace gamesys
