#include <gtest/gtest.h>

#include "gamesys/error.hpp"
#include "gamesys/sampler.hpp"
#include "support/oracles.hpp"

namespace gamesys {
namespace {

TEST(Sampler, CapsOfOne) {
  SamplerCaps caps;
  for (Category c : kAllCategories) {
    switch (c) {
      case Category::Resources: caps.maxResources = 1; break;
      case Category::Actions: caps.maxActions = 1; break;
      case Category::States: caps.maxStates = 1; break;
      case Category::Transitions: caps.maxTransitions = 1; break;
      case Category::Taps: caps.maxTaps = 1; break;
      case Category::Drains: caps.maxDrains = 1; break;
      case Category::Converters: caps.maxConverters = 1; break;
    }
  }
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const GameDesign d = sample_random_design(caps, rng);
    EXPECT_TRUE(validate_design(d).valid);
    for (Category c : kAllCategories) {
      EXPECT_LE(component_count(d, c), 1u);
    }
    EXPECT_EQ(d.states.size(), 1u);
    EXPECT_TRUE(d.converters.empty());
  }
}

TEST(Sampler, ThousandValidDesignsWithinCaps) {
  const SamplerCaps caps;
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const GameDesign d = sample_random_design(caps, rng);
    ASSERT_TRUE(validate_design(d).valid);
    for (Category c : kAllCategories) {
      EXPECT_LE(component_count(d, c), static_cast<std::size_t>(caps.cap(c)));
    }
    for (const auto& r : d.resources) {
      EXPECT_GE(r.capacity, caps.capacityMin);
      EXPECT_LE(r.capacity, caps.capacityMax);
    }
    for (const auto& s : d.states) {
      EXPECT_GE(s.importance, caps.importanceMin);
      EXPECT_LE(s.importance, caps.importanceMax);
      EXPECT_EQ(s.importance, static_cast<int>(s.importance));
    }
    for (const auto& t : d.taps) {
      EXPECT_GE(t.amount, caps.amountMin);
      EXPECT_LE(t.amount, caps.amountMax);
    }
    for (const auto& a : d.actions) EXPECT_LE(a.costs.size(), 2u);
  }
}

TEST(Sampler, StateCountUniform) {
  SamplerCaps caps;
  caps.maxStates = 6;
  Rng rng(5);
  std::vector<int> counts(caps.maxStates, 0);
  for (int i = 0; i < 6000; ++i) {
    ++counts[sample_random_design(caps, rng).states.size() - 1];
  }
  EXPECT_LT(testing::chi_square_uniform(counts),
            testing::chi_square_critical(caps.maxStates - 1));
}

TEST(Sampler, Deterministic) {
  const SamplerCaps caps;
  Rng a(9), b(9);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(sample_random_design(caps, a), sample_random_design(caps, b));
  }
}

TEST(Sampler, InvalidCaps) {
  SamplerCaps caps;
  caps.maxStates = 0;
  EXPECT_THROW(caps.validate(), Error);
  caps = {};
  caps.amountMin = 5;
  caps.amountMax = 1;
  EXPECT_THROW(caps.validate(), Error);
}

}  // namespace
}  // namespace gamesys
