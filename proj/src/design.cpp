#include "gamesys/design.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace gamesys {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::UnknownState: return "UNKNOWN_STATE";
    case ErrorCode::UnknownAction: return "UNKNOWN_ACTION";
    case ErrorCode::Unaffordable: return "UNAFFORDABLE";
    case ErrorCode::InvalidDesign: return "INVALID_DESIGN";
    case ErrorCode::NoValidActions: return "NO_VALID_ACTIONS";
    case ErrorCode::NoLegalEdit: return "NO_LEGAL_EDIT";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::UnknownMetric: return "UNKNOWN_METRIC";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const T& item) { return item.id == id; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const ResourceDef* GameDesign::find_resource(std::string_view id) const {
  return find_by_id(resources, id);
}
const ActionDef* GameDesign::find_action(std::string_view id) const {
  return find_by_id(actions, id);
}
const StateDef* GameDesign::find_state(std::string_view id) const {
  return find_by_id(states, id);
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::Resources: return "resources";
    case Category::Actions: return "actions";
    case Category::States: return "states";
    case Category::Transitions: return "transitions";
    case Category::Taps: return "taps";
    case Category::Drains: return "drains";
    case Category::Converters: return "converters";
  }
  return "";
}

std::optional<Category> category_from_name(std::string_view name) {
  for (Category c : kAllCategories) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

std::size_t component_count(const GameDesign& design, Category category) {
  switch (category) {
    case Category::Resources: return design.resources.size();
    case Category::Actions: return design.actions.size();
    case Category::States: return design.states.size();
    case Category::Transitions: return design.transitions.size();
    case Category::Taps: return design.taps.size();
    case Category::Drains: return design.drains.size();
    case Category::Converters: return design.converters.size();
  }
  return 0;
}

GameDesign canonicalize(GameDesign design) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(design.resources.begin(), design.resources.end(), by_id);
  for (auto& action : design.actions) {
    std::sort(action.costs.begin(), action.costs.end(),
              [](const ResourceAmount& a, const ResourceAmount& b) {
                return std::tie(a.resource, a.amount) <
                       std::tie(b.resource, b.amount);
              });
  }
  std::sort(design.actions.begin(), design.actions.end(), by_id);
  std::sort(design.states.begin(), design.states.end(), by_id);
  std::sort(design.transitions.begin(), design.transitions.end(),
            [](const TransitionDef& a, const TransitionDef& b) {
              return std::tie(a.from, a.action, a.to) <
                     std::tie(b.from, b.action, b.to);
            });
  auto flow_less = [](const FlowDef& a, const FlowDef& b) {
    return std::tie(a.state, a.resource, a.amount) <
           std::tie(b.state, b.resource, b.amount);
  };
  std::sort(design.taps.begin(), design.taps.end(), flow_less);
  std::sort(design.drains.begin(), design.drains.end(), flow_less);
  std::sort(design.converters.begin(), design.converters.end(),
            [](const ConverterDef& a, const ConverterDef& b) {
              return std::tie(a.state, a.fromResource, a.fromAmount,
                              a.toResource, a.toAmount) <
                     std::tie(b.state, b.fromResource, b.fromAmount,
                              b.toResource, b.toAmount);
            });
  return design;
}

bool equivalent(const GameDesign& a, const GameDesign& b) {
  return canonicalize(a) == canonicalize(b);
}

GameDesign topology_of(GameDesign design) {
  for (auto& r : design.resources) r.capacity = 0.0;
  for (auto& a : design.actions) {
    for (auto& c : a.costs) c.amount = 0.0;
  }
  for (auto& s : design.states) s.importance = 0.0;
  for (auto& t : design.taps) t.amount = 0.0;
  for (auto& d : design.drains) d.amount = 0.0;
  for (auto& c : design.converters) {
    c.fromAmount = 0.0;
    c.toAmount = 0.0;
  }
  return canonicalize(std::move(design));
}

bool ValidationReport::has_code(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

std::size_t ValidationReport::error_count() const {
  return std::count_if(issues.begin(), issues.end(), [](const auto& i) {
    return i.severity == Severity::Error;
  });
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

namespace {

class Validator {
 public:
  explicit Validator(const GameDesign& design) : design_(design) {}

  ValidationReport run() {
    check_ids();
    check_actions();
    check_states();
    check_start();
    check_transitions();
    check_flows(design_.taps, "taps");
    check_flows(design_.drains, "drains");
    check_converters();
    if (report_.error_count() == 0) {
      check_reachability();
      check_action_usage();
      check_unfunded_costs();
    }
    report_.valid = report_.error_count() == 0;
    return std::move(report_);
  }

 private:
  void error(std::string code, std::string message, std::string ref) {
    report_.issues.push_back(
        {Severity::Error, std::move(code), std::move(message), std::move(ref)});
  }

  void warning(std::string code, std::string message, std::string ref) {
    report_.issues.push_back({Severity::Warning, std::move(code),
                              std::move(message), std::move(ref)});
  }

  void check_amount(double value, const std::string& what,
                    const std::string& ref) {
    if (!std::isfinite(value)) {
      error("NON_FINITE_VALUE", what + " must be finite", ref);
    } else if (value < 0.0) {
      error("NEGATIVE_VALUE", what + " must be non-negative", ref);
    }
  }

  template <typename T>
  void check_unique_ids(const std::vector<T>& items, std::string_view kind,
                        std::set<std::string>& seen) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string ref = std::string(kind) + "[" + std::to_string(i) + "]";
      if (items[i].id.empty()) {
        error("EMPTY_ID", std::string(kind) + " entry has an empty id", ref);
      } else if (!seen.insert(items[i].id).second) {
        error("DUPLICATE_ID",
              "duplicate " + std::string(kind) + " id '" + items[i].id + "'",
              std::string(kind) + "/" + items[i].id);
      }
    }
  }

  void check_ids() {
    check_unique_ids(design_.resources, "resources", resource_ids_);
    check_unique_ids(design_.actions, "actions", action_ids_);
    check_unique_ids(design_.states, "states", state_ids_);
    for (const auto& r : design_.resources) {
      check_amount(r.capacity, "capacity", "resources/" + r.id);
    }
  }

  void check_actions() {
    for (const auto& a : design_.actions) {
      std::set<std::string> cost_resources;
      const std::string ref = "actions/" + a.id;
      for (const auto& c : a.costs) {
        if (!resource_ids_.contains(c.resource)) {
          error("UNKNOWN_RESOURCE",
                "cost references unknown resource '" + c.resource + "'", ref);
        }
        if (!cost_resources.insert(c.resource).second) {
          error("DUPLICATE_COST",
                "more than one cost entry for resource '" + c.resource + "'",
                ref);
        }
        check_amount(c.amount, "cost amount", ref);
      }
    }
  }

  void check_states() {
    for (const auto& s : design_.states) {
      check_amount(s.importance, "importance", "states/" + s.id);
    }
  }

  void check_start() {
    if (!state_ids_.contains(design_.startState)) {
      error("MISSING_START",
            "start state '" + design_.startState + "' is not a defined state",
            "startState");
    }
  }

  void check_state_ref(const std::string& id, const std::string& ref) {
    if (!state_ids_.contains(id)) {
      error("UNKNOWN_STATE", "unknown state '" + id + "'", ref);
    }
  }

  void check_resource_ref(const std::string& id, const std::string& ref) {
    if (!resource_ids_.contains(id)) {
      error("UNKNOWN_RESOURCE", "unknown resource '" + id + "'", ref);
    }
  }

  void check_transitions() {
    std::set<std::pair<std::string, std::string>> keys;
    for (std::size_t i = 0; i < design_.transitions.size(); ++i) {
      const auto& t = design_.transitions[i];
      const std::string ref = "transitions[" + std::to_string(i) + "]";
      check_state_ref(t.from, ref);
      check_state_ref(t.to, ref);
      if (!action_ids_.contains(t.action)) {
        error("UNKNOWN_ACTION", "unknown action '" + t.action + "'", ref);
      }
      if (!keys.emplace(t.from, t.action).second) {
        error("DUPLICATE_TRANSITION",
              "more than one transition for (" + t.from + ", " + t.action + ")",
              ref);
      }
    }
  }

  void check_flows(const std::vector<FlowDef>& flows, std::string_view kind) {
    for (std::size_t i = 0; i < flows.size(); ++i) {
      const auto& f = flows[i];
      const std::string ref =
          std::string(kind) + "[" + std::to_string(i) + "]";
      check_state_ref(f.state, ref);
      check_resource_ref(f.resource, ref);
      check_amount(f.amount, "amount", ref);
    }
  }

  void check_converters() {
    for (std::size_t i = 0; i < design_.converters.size(); ++i) {
      const auto& c = design_.converters[i];
      const std::string ref = "converters[" + std::to_string(i) + "]";
      check_state_ref(c.state, ref);
      check_resource_ref(c.fromResource, ref);
      check_resource_ref(c.toResource, ref);
      check_amount(c.fromAmount, "fromAmount", ref);
      check_amount(c.toAmount, "toAmount", ref);
      if (c.fromResource == c.toResource) {
        error("CONVERTER_SAME_RESOURCE",
              "converter must exchange two different resources", ref);
      }
    }
  }

  void check_reachability() {
    std::map<std::string, std::vector<std::string>> edges;
    for (const auto& t : design_.transitions) edges[t.from].push_back(t.to);
    std::set<std::string> seen{design_.startState};
    std::deque<std::string> frontier{design_.startState};
    while (!frontier.empty()) {
      const std::string s = frontier.front();
      frontier.pop_front();
      for (const auto& next : edges[s]) {
        if (seen.insert(next).second) frontier.push_back(next);
      }
    }
    for (const auto& s : design_.states) {
      if (!seen.contains(s.id)) {
        warning("UNREACHABLE_STATE",
                "state '" + s.id + "' cannot be reached from the start state",
                "states/" + s.id);
      }
    }
  }

  void check_action_usage() {
    std::set<std::string> used;
    for (const auto& t : design_.transitions) used.insert(t.action);
    for (const auto& a : design_.actions) {
      if (!used.contains(a.id)) {
        warning("ACTION_WITHOUT_TRANSITION",
                "action '" + a.id + "' is not used by any transition",
                "actions/" + a.id);
      }
    }
  }

  // The player starts with nothing, so a cost on a resource that nothing
  // ever supplies makes the action permanently unavailable.
  void check_unfunded_costs() {
    std::set<std::string> funded;
    for (const auto& t : design_.taps) {
      if (t.amount > 0.0) funded.insert(t.resource);
    }
    for (const auto& c : design_.converters) {
      if (c.toAmount > 0.0) funded.insert(c.toResource);
    }
    for (const auto& a : design_.actions) {
      for (const auto& c : a.costs) {
        if (c.amount > 0.0 && !funded.contains(c.resource)) {
          warning("UNFUNDED_COST",
                  "action '" + a.id + "' costs resource '" + c.resource +
                      "' which is never gained",
                  "actions/" + a.id);
        }
      }
    }
  }

  const GameDesign& design_;
  ValidationReport report_;
  std::set<std::string> resource_ids_;
  std::set<std::string> action_ids_;
  std::set<std::string> state_ids_;
};

std::string failure_message(ErrorCode code, const ValidationReport& report) {
  std::ostringstream out;
  out << to_string(code) << ": design has " << report.error_count()
      << " error(s)";
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::Error) {
      out << "; " << issue.code << " at " << issue.componentRef;
      break;
    }
  }
  return out.str();
}

}  // namespace

ValidationReport validate_design(const GameDesign& design) {
  return Validator(design).run();
}

ValidationFailure::ValidationFailure(ErrorCode code, ValidationReport report)
    : Error(code, failure_message(code, report)), report_(std::move(report)) {}

void require_valid(const GameDesign& design, ErrorCode code) {
  ValidationReport report = validate_design(design);
  if (!report.valid) throw ValidationFailure(code, std::move(report));
}

}  // namespace gamesys
