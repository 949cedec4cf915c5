#pragma once

#include <string>
#include <vector>

#include "gamesys/design.hpp"
#include "gamesys/sampler.hpp"

namespace gamesys::testing {

inline GameDesign single_state_design() {
  GameDesign d;
  d.name = "lonely";
  d.states = {{"only", 1.0}};
  d.startState = "only";
  return d;
}

// Two states joined by a forced cycle: s1 -go-> s2 -go-> s1.
inline GameDesign cycle_design() {
  GameDesign d;
  d.name = "cycle";
  d.actions = {{"go", {}}};
  d.states = {{"s1", 1.0}, {"s2", 2.0}};
  d.startState = "s1";
  d.transitions = {{"s1", "go", "s2"}, {"s2", "go", "s1"}};
  return d;
}

// A shop where buying costs gold and a field where walking earns it.
inline GameDesign shop_design() {
  GameDesign d;
  d.name = "shop";
  d.resources = {{"gold", 100.0}, {"item", 10.0}};
  d.actions = {{"buy", {{"gold", 5.0}}}, {"walk", {}}};
  d.states = {{"field", 1.0}, {"shop", 3.0}};
  d.startState = "field";
  d.transitions = {{"field", "walk", "shop"},
                   {"shop", "walk", "field"},
                   {"shop", "buy", "shop"}};
  d.taps = {{"field", "gold", 10.0}, {"shop", "item", 1.0}};
  d.drains = {{"shop", "gold", 1.0}};
  return d;
}

// Walking converts time into stamina; sprinting spends stamina.
inline GameDesign sprint_design() {
  GameDesign d;
  d.name = "sprint";
  d.resources = {{"stamina", 10.0}, {"time", 100.0}};
  d.actions = {{"sprint", {{"stamina", 3.0}}}, {"slow", {}}, {"wait", {}}};
  d.states = {{"walking", 1.0}, {"running", 2.0}};
  d.startState = "walking";
  d.transitions = {{"walking", "sprint", "running"},
                   {"walking", "wait", "walking"},
                   {"running", "slow", "walking"}};
  d.taps = {{"walking", "time", 5.0}};
  d.converters = {{"walking", "time", 2.0, "stamina", 1.0}};
  return d;
}

// Random design with no resources: at most 4 states and 3 actions.
inline GameDesign resource_free_design(Rng& rng) {
  SamplerCaps caps;
  caps.maxStates = 4;
  caps.maxActions = 3;
  caps.maxResources = 1;
  caps.maxTransitions = 12;
  GameDesign d = sample_random_design(caps, rng);
  d.resources.clear();
  for (auto& a : d.actions) a.costs.clear();
  d.taps.clear();
  d.drains.clear();
  d.converters.clear();
  return d;
}

}  // namespace gamesys::testing
