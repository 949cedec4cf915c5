#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "gamesys/design.hpp"
#include "support/fixtures.hpp"

namespace gamesys {
namespace {

using testing::cycle_design;
using testing::shop_design;
using testing::single_state_design;

TEST(ValidateDesign, AcceptsFixtures) {
  for (const auto& d : {single_state_design(), cycle_design(), shop_design(),
                        testing::sprint_design()}) {
    const auto report = validate_design(d);
    EXPECT_TRUE(report.valid) << d.name;
    EXPECT_EQ(report.error_count(), 0u);
  }
}

TEST(ValidateDesign, MissingStartState) {
  GameDesign d = cycle_design();
  d.startState = "foo";
  const auto report = validate_design(d);
  EXPECT_FALSE(report.valid);
  EXPECT_TRUE(report.has_code("MISSING_START"));
}

TEST(ValidateDesign, DuplicateTransition) {
  GameDesign d;
  d.actions = {{"jump", {}}};
  d.states = {{"s1", 0}, {"s2", 0}, {"s3", 0}};
  d.startState = "s1";
  d.transitions = {{"s1", "jump", "s2"}, {"s1", "jump", "s3"}};
  const auto report = validate_design(d);
  EXPECT_FALSE(report.valid);
  EXPECT_TRUE(report.has_code("DUPLICATE_TRANSITION"));
}

TEST(ValidateDesign, UnreachableStateIsOnlyAWarning) {
  GameDesign d;
  d.actions = {{"stay", {}}};
  d.states = {{"s1", 0}, {"s2", 0}};
  d.startState = "s1";
  d.transitions = {{"s1", "stay", "s1"}};
  const auto report = validate_design(d);
  EXPECT_TRUE(report.valid);
  ASSERT_TRUE(report.has_code("UNREACHABLE_STATE"));
  for (const auto& issue : report.issues) {
    if (issue.code == "UNREACHABLE_STATE") {
      EXPECT_EQ(issue.severity, Severity::Warning);
      EXPECT_EQ(issue.componentRef, "states/s2");
    }
  }
}

TEST(ValidateDesign, ReachabilityFollowsChains) {
  GameDesign d = cycle_design();
  d.states.push_back({"s3", 0});
  d.transitions.push_back({"s2", "go2", "s3"});
  d.actions.push_back({"go2", {}});
  EXPECT_FALSE(validate_design(d).has_code("UNREACHABLE_STATE"));
}

TEST(ValidateDesign, ActionWithoutTransitionWarns) {
  GameDesign d = cycle_design();
  d.actions.push_back({"idle", {}});
  const auto report = validate_design(d);
  EXPECT_TRUE(report.valid);
  EXPECT_TRUE(report.has_code("ACTION_WITHOUT_TRANSITION"));
}

TEST(ValidateDesign, UnfundedCostWarns) {
  GameDesign d = cycle_design();
  d.resources = {{"gold", 10}};
  d.actions[0].costs = {{"gold", 1}};
  const auto report = validate_design(d);
  EXPECT_TRUE(report.valid);
  EXPECT_TRUE(report.has_code("UNFUNDED_COST"));

  d.taps = {{"s1", "gold", 2}};
  EXPECT_FALSE(validate_design(d).has_code("UNFUNDED_COST"));
}

TEST(ValidateDesign, ReferenceAndValueErrors) {
  GameDesign d = shop_design();
  d.taps.push_back({"nowhere", "gold", 1});
  d.drains.push_back({"shop", "silver", 1});
  d.transitions.push_back({"field", "fly", "shop"});
  d.converters.push_back({"shop", "gold", 1, "gold", 2});
  d.resources.push_back({"gold", 5});
  d.states.push_back({"", 0});
  d.actions[0].costs.push_back({"gold", 2});
  d.resources[1].capacity = -1;
  const auto report = validate_design(d);
  EXPECT_FALSE(report.valid);
  for (const char* code :
       {"UNKNOWN_STATE", "UNKNOWN_RESOURCE", "UNKNOWN_ACTION",
        "CONVERTER_SAME_RESOURCE", "DUPLICATE_ID", "EMPTY_ID", "DUPLICATE_COST",
        "NEGATIVE_VALUE"}) {
    EXPECT_TRUE(report.has_code(code)) << code;
  }
}

TEST(ValidateDesign, NonFiniteValuesAreErrors) {
  GameDesign d = shop_design();
  d.taps[0].amount = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(validate_design(d).has_code("NON_FINITE_VALUE"));
}

TEST(ValidateDesign, ValidIffNoErrors) {
  GameDesign d = shop_design();
  d.startState = "nope";
  const auto report = validate_design(d);
  EXPECT_EQ(report.valid, report.error_count() == 0);
}

TEST(Canonicalize, IgnoresListOrder) {
  GameDesign a = shop_design();
  GameDesign b = a;
  std::reverse(b.states.begin(), b.states.end());
  std::reverse(b.transitions.begin(), b.transitions.end());
  std::reverse(b.taps.begin(), b.taps.end());
  EXPECT_NE(a, b);
  EXPECT_TRUE(equivalent(a, b));
}

TEST(TopologyOf, ErasesNumbersOnly) {
  GameDesign a = shop_design();
  GameDesign b = a;
  b.taps[0].amount = 99;
  b.resources[0].capacity = 1;
  EXPECT_EQ(topology_of(a), topology_of(b));
  b.taps[0].state = "shop";
  EXPECT_NE(topology_of(a), topology_of(b));
}

TEST(Categories, NamesRoundTrip) {
  for (Category c : kAllCategories) {
    EXPECT_EQ(category_from_name(category_name(c)), c);
  }
  EXPECT_FALSE(category_from_name("events").has_value());
}

TEST(RequireValid, ThrowsWithReport) {
  GameDesign d = cycle_design();
  d.startState = "x";
  try {
    require_valid(d);
    FAIL() << "expected ValidationFailure";
  } catch (const ValidationFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDesign);
    EXPECT_TRUE(e.report().has_code("MISSING_START"));
  }
}

}  // namespace
}  // namespace gamesys
