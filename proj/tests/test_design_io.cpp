#include <gtest/gtest.h>

#include <algorithm>

#include "gamesys/design_io.hpp"
#include "gamesys/sampler.hpp"
#include "support/fixtures.hpp"

namespace gamesys {
namespace {

constexpr const char* kMinimal = R"({
  "name": "minimal",
  "resources": [], "actions": [],
  "states": [{"id": "start", "importance": 0}],
  "startState": "start",
  "transitions": [], "taps": [], "drains": [], "converters": []
})";

ErrorCode load_error(const std::string& text) {
  try {
    load_design(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected load_design to fail";
  return ErrorCode::IoError;
}

TEST(LoadDesign, MinimalDocument) {
  const GameDesign d = load_design(kMinimal);
  EXPECT_EQ(d.name, "minimal");
  ASSERT_EQ(d.states.size(), 1u);
  EXPECT_EQ(d.startState, "start");
  EXPECT_TRUE(d.transitions.empty());
}

TEST(LoadDesign, NegativeTapAmountIsSchemaError) {
  std::string text = kMinimal;
  text.replace(text.find("\"taps\": []"), 10,
               R"("taps": [{"state": "start", "resource": "gold", "amount": -1}])");
  EXPECT_EQ(load_error(text), ErrorCode::SchemaError);
}

TEST(LoadDesign, SchemaErrors) {
  std::string unknown = kMinimal;
  unknown.replace(unknown.find("\"name\""), 6, "\"events\": [], \"name\"");
  EXPECT_EQ(load_error(unknown), ErrorCode::SchemaError);

  std::string missing = kMinimal;
  missing.replace(missing.find("\"drains\": [],"), 13, "");
  EXPECT_EQ(load_error(missing), ErrorCode::SchemaError);

  std::string mistyped = kMinimal;
  mistyped.replace(mistyped.find("\"importance\": 0"), 15, "\"importance\": \"high\"");
  EXPECT_EQ(load_error(mistyped), ErrorCode::SchemaError);

  EXPECT_EQ(load_error("[1, 2]"), ErrorCode::SchemaError);
}

TEST(LoadDesign, ParseAndValidationErrors) {
  EXPECT_EQ(load_error("{ not json"), ErrorCode::ParseError);

  std::string bad_start = kMinimal;
  bad_start.replace(bad_start.find("\"startState\": \"start\""), 21,
                    "\"startState\": \"elsewhere\"");
  try {
    load_design(bad_start);
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(e.report().has_code("MISSING_START"));
  }
}

TEST(LoadDesign, AbsentStartStateIsMissingStart) {
  std::string text = kMinimal;
  text.replace(text.find("\"startState\": \"start\","), 22, "");
  try {
    load_design(text);
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_TRUE(e.report().has_code("MISSING_START"));
  }
}

TEST(SaveDesign, DeterministicAndOrderInsensitive) {
  const GameDesign a = testing::shop_design();
  GameDesign b = a;
  std::reverse(b.resources.begin(), b.resources.end());
  std::reverse(b.transitions.begin(), b.transitions.end());
  std::reverse(b.actions.begin(), b.actions.end());
  EXPECT_EQ(save_design(a), save_design(a));
  EXPECT_EQ(save_design(a), save_design(b));
}

TEST(SaveDesign, RejectsInvalidDesign) {
  GameDesign d = testing::shop_design();
  d.startState = "";
  EXPECT_THROW(save_design(d), ValidationFailure);
}

TEST(SaveDesign, RoundTripProperty) {
  Rng rng(20240611);
  const SamplerCaps caps;
  for (int i = 0; i < 300; ++i) {
    const GameDesign original = sample_random_design(caps, rng);
    const std::string text = save_design(original);
    const GameDesign loaded = load_design(text);
    EXPECT_TRUE(equivalent(original, loaded)) << text;
    EXPECT_TRUE(validate_design(loaded).valid);
    EXPECT_EQ(save_design(loaded), text);
  }
}

TEST(DesignDigest, StableUnderReordering) {
  GameDesign a = testing::sprint_design();
  GameDesign b = a;
  std::reverse(b.states.begin(), b.states.end());
  EXPECT_EQ(design_digest(a), design_digest(b));
  EXPECT_EQ(design_digest(a).size(), 16u);
  b.taps[0].amount += 1;
  EXPECT_NE(design_digest(a), design_digest(b));
}

TEST(ValidationReportJson, CarriesIssues) {
  GameDesign d = testing::cycle_design();
  d.startState = "nope";
  const auto doc = validation_report_to_json(validate_design(d));
  EXPECT_FALSE(doc["valid"].get<bool>());
  EXPECT_EQ(doc["issues"][0]["code"], "MISSING_START");
  EXPECT_EQ(doc["issues"][0]["severity"], "error");
}

}  // namespace
}  // namespace gamesys
