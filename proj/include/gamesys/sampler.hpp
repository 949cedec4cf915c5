#pragma once

#include "gamesys/design.hpp"
#include "gamesys/simulation.hpp"

namespace gamesys {

// Upper bounds on component counts and value ranges for random designs.
struct SamplerCaps {
  int maxStates = 10;
  int maxActions = 8;
  int maxResources = 5;
  int maxTransitions = 20;
  int maxTaps = 5;
  int maxDrains = 5;
  int maxConverters = 5;
  double amountMin = 0.0;
  double amountMax = 20.0;
  double capacityMin = 1.0;
  double capacityMax = 100.0;
  int importanceMin = 0;
  int importanceMax = 5;

  // Throws Error(InvalidConfig).
  void validate() const;
  int cap(Category category) const;
};

// Draws a valid design. States, actions and resources number uniformly in
// [1, cap]; transitions and attachments in [0, cap]. Each action costs
// between 0 and min(2, resources) distinct resources.
GameDesign sample_random_design(const SamplerCaps& caps, Rng& rng);

// Attribute samplers shared with the structural generator.
namespace sampling {
double amount(const SamplerCaps& caps, Rng& rng);
double capacity(const SamplerCaps& caps, Rng& rng);
double importance(const SamplerCaps& caps, Rng& rng);
std::size_t index(std::size_t count, Rng& rng);
}  // namespace sampling

}  // namespace gamesys
