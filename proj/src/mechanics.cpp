#include "gamesys/mechanics.hpp"

#include <algorithm>

namespace gamesys {

Inventory Inventory::empty_for(const GameDesign& design) {
  Inventory inventory;
  for (const auto& r : design.resources) inventory.amounts[r.id] = 0.0;
  return inventory;
}

double Inventory::operator[](const std::string& resource) const {
  auto it = amounts.find(resource);
  return it == amounts.end() ? 0.0 : it->second;
}

namespace {

std::optional<int> index_of(const std::vector<std::string>& sorted_ids,
                            std::string_view id) {
  auto it = std::lower_bound(sorted_ids.begin(), sorted_ids.end(), id);
  if (it == sorted_ids.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - sorted_ids.begin());
}

}  // namespace

CompiledDesign::CompiledDesign(const GameDesign& input) {
  require_valid(input, ErrorCode::InvalidDesign);
  const GameDesign design = canonicalize(input);

  for (const auto& r : design.resources) {
    resource_ids_.push_back(r.id);
    capacity_.push_back(r.capacity);
  }
  for (const auto& a : design.actions) action_ids_.push_back(a.id);
  for (const auto& s : design.states) {
    state_ids_.push_back(s.id);
    importance_.push_back(s.importance);
  }
  start_ = *state_index(design.startState);

  costs_.resize(action_ids_.size());
  for (std::size_t a = 0; a < design.actions.size(); ++a) {
    for (const auto& c : design.actions[a].costs) {
      costs_[a].push_back({*resource_index(c.resource), c.amount});
    }
  }

  const int ns = state_count();
  const int na = action_count();
  next_.assign(static_cast<std::size_t>(ns) * na, -1);
  successors_.resize(ns);
  outgoing_.resize(ns);
  for (const auto& t : design.transitions) {
    const int from = *state_index(t.from);
    const int action = *action_index(t.action);
    const int to = *state_index(t.to);
    next_[from * na + action] = to;
  }
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      const int to = transition(s, a);
      if (to < 0) continue;
      outgoing_[s].emplace_back(a, to);
      if (std::find(successors_[s].begin(), successors_[s].end(), to) ==
          successors_[s].end()) {
        successors_[s].push_back(to);
      }
    }
    std::sort(successors_[s].begin(), successors_[s].end());
  }

  taps_.resize(ns);
  drains_.resize(ns);
  converters_.resize(ns);
  for (const auto& t : design.taps) {
    taps_[*state_index(t.state)].push_back({*resource_index(t.resource), t.amount});
  }
  for (const auto& d : design.drains) {
    drains_[*state_index(d.state)].push_back(
        {*resource_index(d.resource), d.amount});
  }
  for (const auto& c : design.converters) {
    converters_[*state_index(c.state)].push_back(
        {*resource_index(c.fromResource), c.fromAmount,
         *resource_index(c.toResource), c.toAmount});
  }
}

std::optional<int> CompiledDesign::state_index(std::string_view id) const {
  return index_of(state_ids_, id);
}
std::optional<int> CompiledDesign::action_index(std::string_view id) const {
  return index_of(action_ids_, id);
}
std::optional<int> CompiledDesign::resource_index(std::string_view id) const {
  return index_of(resource_ids_, id);
}

bool CompiledDesign::affordable(int a, std::span<const double> inventory) const {
  for (const Flow& cost : costs_[a]) {
    if (inventory[cost.resource] < cost.amount) return false;
  }
  return true;
}

void CompiledDesign::available_actions(int s, std::span<const double> inventory,
                                       std::vector<int>& out) const {
  out.clear();
  for (const auto& [action, to] : outgoing_[s]) {
    if (affordable(action, inventory)) out.push_back(action);
  }
}

void CompiledDesign::pay(int a, std::span<double> inventory) const {
  for (const Flow& cost : costs_[a]) {
    inventory[cost.resource] = std::max(0.0, inventory[cost.resource] - cost.amount);
  }
}

CompiledDesign::Arrival CompiledDesign::arrive(
    int s, std::span<double> inventory, std::span<double> gained_by_resource,
    std::span<double> lost_by_resource) const {
  Arrival result;
  auto add = [&](int r, double amount) {
    const double before = inventory[r];
    inventory[r] = std::min(before + amount, capacity_[r]);
    // A capacity lowered below the current amount never removes resources.
    inventory[r] = std::max(inventory[r], before);
    const double delta = inventory[r] - before;
    result.gains += delta;
    if (!gained_by_resource.empty()) gained_by_resource[r] += delta;
  };
  auto remove = [&](int r, double amount) {
    const double before = inventory[r];
    inventory[r] = std::max(before - amount, 0.0);
    const double delta = before - inventory[r];
    result.losses += delta;
    if (!lost_by_resource.empty()) lost_by_resource[r] += delta;
  };

  for (const Flow& tap : taps_[s]) add(tap.resource, tap.amount);
  for (const Flow& drain : drains_[s]) remove(drain.resource, drain.amount);
  for (const Converter& c : converters_[s]) {
    if (inventory[c.from] < c.fromAmount) continue;
    remove(c.from, c.fromAmount);
    add(c.to, c.toAmount);
  }
  return result;
}

std::vector<double> CompiledDesign::to_vector(const Inventory& inventory) const {
  std::vector<double> amounts(resource_ids_.size(), 0.0);
  for (const auto& [id, amount] : inventory.amounts) {
    auto r = resource_index(id);
    if (!r) {
      throw Error(ErrorCode::InvalidConfig,
                  "inventory references unknown resource '" + id + "'");
    }
    amounts[*r] = amount;
  }
  return amounts;
}

Inventory CompiledDesign::to_inventory(std::span<const double> amounts) const {
  Inventory inventory;
  for (std::size_t r = 0; r < resource_ids_.size(); ++r) {
    inventory.amounts[resource_ids_[r]] = amounts[r];
  }
  return inventory;
}

namespace {

int require_state(const CompiledDesign& compiled, std::string_view state) {
  auto s = compiled.state_index(state);
  if (!s) {
    throw Error(ErrorCode::UnknownState,
                "UNKNOWN_STATE: '" + std::string(state) + "'");
  }
  return *s;
}

}  // namespace

std::vector<std::string> available_actions(const GameDesign& design,
                                           std::string_view state,
                                           const Inventory& inventory) {
  const CompiledDesign compiled(design);
  const int s = require_state(compiled, state);
  const std::vector<double> amounts = compiled.to_vector(inventory);
  std::vector<int> actions;
  compiled.available_actions(s, amounts, actions);
  std::vector<std::string> ids;
  for (int a : actions) ids.push_back(compiled.action_id(a));
  return ids;
}

Inventory apply_action_cost(const GameDesign& design, std::string_view action,
                            const Inventory& inventory) {
  const CompiledDesign compiled(design);
  auto a = compiled.action_index(action);
  if (!a) {
    throw Error(ErrorCode::UnknownAction,
                "UNKNOWN_ACTION: '" + std::string(action) + "'");
  }
  std::vector<double> amounts = compiled.to_vector(inventory);
  if (!compiled.affordable(*a, amounts)) {
    throw Error(ErrorCode::Unaffordable,
                "UNAFFORDABLE: cannot pay for '" + std::string(action) + "'");
  }
  compiled.pay(*a, amounts);
  return compiled.to_inventory(amounts);
}

ArrivalOutcome apply_arrival_effects(const GameDesign& design,
                                     std::string_view state,
                                     const Inventory& inventory) {
  const CompiledDesign compiled(design);
  const int s = require_state(compiled, state);
  std::vector<double> amounts = compiled.to_vector(inventory);
  const auto arrival = compiled.arrive(s, amounts);
  return {compiled.to_inventory(amounts), arrival.gains, arrival.losses};
}

}  // namespace gamesys
