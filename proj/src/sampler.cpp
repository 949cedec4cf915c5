#include "gamesys/sampler.hpp"

#include <algorithm>
#include <numeric>

namespace gamesys {

void SamplerCaps::validate() const {
  for (Category c : kAllCategories) {
    if (cap(c) < 1) {
      throw Error(ErrorCode::InvalidConfig,
                  "INVALID_CONFIG: cap for " + std::string(category_name(c)) +
                      " must be at least 1");
    }
  }
  if (!(amountMin >= 0.0 && amountMin <= amountMax)) {
    throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: bad amount range");
  }
  if (!(capacityMin >= 0.0 && capacityMin <= capacityMax)) {
    throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: bad capacity range");
  }
  if (!(importanceMin >= 0 && importanceMin <= importanceMax)) {
    throw Error(ErrorCode::InvalidConfig,
                "INVALID_CONFIG: bad importance range");
  }
}

int SamplerCaps::cap(Category category) const {
  switch (category) {
    case Category::Resources: return maxResources;
    case Category::Actions: return maxActions;
    case Category::States: return maxStates;
    case Category::Transitions: return maxTransitions;
    case Category::Taps: return maxTaps;
    case Category::Drains: return maxDrains;
    case Category::Converters: return maxConverters;
  }
  return 0;
}

namespace sampling {

double amount(const SamplerCaps& caps, Rng& rng) {
  return std::uniform_real_distribution<double>(caps.amountMin,
                                                caps.amountMax)(rng);
}

double capacity(const SamplerCaps& caps, Rng& rng) {
  return std::uniform_real_distribution<double>(caps.capacityMin,
                                                caps.capacityMax)(rng);
}

double importance(const SamplerCaps& caps, Rng& rng) {
  return std::uniform_int_distribution<int>(caps.importanceMin,
                                            caps.importanceMax)(rng);
}

std::size_t index(std::size_t count, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

}  // namespace sampling

namespace {

int count_in(int lo, int hi, Rng& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

GameDesign sample_random_design(const SamplerCaps& caps, Rng& rng) {
  caps.validate();
  GameDesign design;
  design.name = "random";

  const int n_resources = count_in(1, caps.maxResources, rng);
  const int n_actions = count_in(1, caps.maxActions, rng);
  const int n_states = count_in(1, caps.maxStates, rng);

  for (int r = 0; r < n_resources; ++r) {
    design.resources.push_back(
        {"r" + std::to_string(r), sampling::capacity(caps, rng)});
  }
  std::vector<int> resource_order(n_resources);
  std::iota(resource_order.begin(), resource_order.end(), 0);
  for (int a = 0; a < n_actions; ++a) {
    ActionDef action{"a" + std::to_string(a), {}};
    const int n_costs = count_in(0, std::min(2, n_resources), rng);
    std::shuffle(resource_order.begin(), resource_order.end(), rng);
    for (int c = 0; c < n_costs; ++c) {
      action.costs.push_back({"r" + std::to_string(resource_order[c]),
                              sampling::amount(caps, rng)});
    }
    design.actions.push_back(std::move(action));
  }
  for (int s = 0; s < n_states; ++s) {
    design.states.push_back(
        {"s" + std::to_string(s), sampling::importance(caps, rng)});
  }
  design.startState = design.states[sampling::index(n_states, rng)].id;

  // Distinct (from, action) keys keep the transition function deterministic.
  const int n_pairs = n_states * n_actions;
  const int n_transitions =
      std::min(count_in(0, caps.maxTransitions, rng), n_pairs);
  std::vector<int> pairs(n_pairs);
  std::iota(pairs.begin(), pairs.end(), 0);
  for (int t = 0; t < n_transitions; ++t) {
    const int pick = t + static_cast<int>(sampling::index(n_pairs - t, rng));
    std::swap(pairs[t], pairs[pick]);
    const int from = pairs[t] / n_actions;
    const int action = pairs[t] % n_actions;
    const int to = static_cast<int>(sampling::index(n_states, rng));
    design.transitions.push_back({design.states[from].id,
                                  design.actions[action].id,
                                  design.states[to].id});
  }

  auto random_state = [&] { return design.states[sampling::index(n_states, rng)].id; };
  auto random_resource = [&] {
    return design.resources[sampling::index(n_resources, rng)].id;
  };
  const int n_taps = count_in(0, caps.maxTaps, rng);
  for (int i = 0; i < n_taps; ++i) {
    const std::string state = random_state();
    const std::string resource = random_resource();
    design.taps.push_back({state, resource, sampling::amount(caps, rng)});
  }
  const int n_drains = count_in(0, caps.maxDrains, rng);
  for (int i = 0; i < n_drains; ++i) {
    const std::string state = random_state();
    const std::string resource = random_resource();
    design.drains.push_back({state, resource, sampling::amount(caps, rng)});
  }
  if (n_resources >= 2) {
    const int n_converters = count_in(0, caps.maxConverters, rng);
    for (int i = 0; i < n_converters; ++i) {
      ConverterDef c;
      c.state = random_state();
      const std::size_t from = sampling::index(n_resources, rng);
      std::size_t to = sampling::index(n_resources - 1, rng);
      if (to >= from) ++to;
      c.fromResource = design.resources[from].id;
      c.fromAmount = sampling::amount(caps, rng);
      c.toResource = design.resources[to].id;
      c.toAmount = sampling::amount(caps, rng);
      design.converters.push_back(std::move(c));
    }
  }
  return design;
}

}  // namespace gamesys
