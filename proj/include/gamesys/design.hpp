#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gamesys/error.hpp"

namespace gamesys {

// A game system: a state machine whose transitions are gated by action costs
// and whose states move resources in and out of the player's inventory.

struct ResourceDef {
  std::string id;
  double capacity = 0.0;

  bool operator==(const ResourceDef&) const = default;
};

struct ResourceAmount {
  std::string resource;
  double amount = 0.0;

  bool operator==(const ResourceAmount&) const = default;
};

struct ActionDef {
  std::string id;
  std::vector<ResourceAmount> costs;

  bool operator==(const ActionDef&) const = default;
};

struct StateDef {
  std::string id;
  double importance = 0.0;

  bool operator==(const StateDef&) const = default;
};

struct TransitionDef {
  std::string from;
  std::string action;
  std::string to;

  bool operator==(const TransitionDef&) const = default;
};

// Taps and drains share a shape; the list they live in decides the sign.
struct FlowDef {
  std::string state;
  std::string resource;
  double amount = 0.0;

  bool operator==(const FlowDef&) const = default;
};

using TapDef = FlowDef;
using DrainDef = FlowDef;

struct ConverterDef {
  std::string state;
  std::string fromResource;
  double fromAmount = 0.0;
  std::string toResource;
  double toAmount = 0.0;

  bool operator==(const ConverterDef&) const = default;
};

struct GameDesign {
  std::string name;
  std::vector<ResourceDef> resources;
  std::vector<ActionDef> actions;
  std::vector<StateDef> states;
  std::string startState;
  std::vector<TransitionDef> transitions;
  std::vector<TapDef> taps;
  std::vector<DrainDef> drains;
  std::vector<ConverterDef> converters;

  bool operator==(const GameDesign&) const = default;

  const ResourceDef* find_resource(std::string_view id) const;
  const ActionDef* find_action(std::string_view id) const;
  const StateDef* find_state(std::string_view id) const;
};

// The seven component categories, in the order used throughout the project
// (freezing, chromosomes, reports).
enum class Category {
  Resources,
  Actions,
  States,
  Transitions,
  Taps,
  Drains,
  Converters,
};

inline constexpr std::array<Category, 7> kAllCategories = {
    Category::Resources, Category::Actions, Category::States,
    Category::Transitions, Category::Taps, Category::Drains,
    Category::Converters};

std::string_view category_name(Category category);
std::optional<Category> category_from_name(std::string_view name);
std::size_t component_count(const GameDesign& design, Category category);

// Sorts every component list (and every action's cost list) into canonical
// order. Two designs that differ only in list order canonicalize equally.
GameDesign canonicalize(GameDesign design);

bool equivalent(const GameDesign& a, const GameDesign& b);

// Same design with all numeric values zeroed: two designs with equal
// topology digests have the same components wired the same way.
GameDesign topology_of(GameDesign design);

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string componentRef;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<ValidationIssue> issues;

  bool has_code(std::string_view code) const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
};

// Checks every structural invariant. Never throws: a malformed design yields
// a report with error-severity issues.
ValidationReport validate_design(const GameDesign& design);

// Raised when a design fails validation where a valid one is required.
class ValidationFailure : public Error {
 public:
  ValidationFailure(ErrorCode code, ValidationReport report);

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Throws ValidationFailure(code) when the design has errors.
void require_valid(const GameDesign& design,
                   ErrorCode code = ErrorCode::InvalidDesign);

}  // namespace gamesys
