#include "gamesys/design_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <sstream>

namespace gamesys {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where,
                               const std::string& what) {
  throw Error(ErrorCode::SchemaError, "SCHEMA_ERROR at " + where + ": " + what);
}

void require_object(const json& value, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!value.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, unused] : value.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) schema_error(where, "unknown field '" + key + "'");
  }
}

const json& field(const json& object, const std::string& key,
                  const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) schema_error(where, "missing field '" + key + "'");
  return *it;
}

std::string string_field(const json& object, const std::string& key,
                         const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_string()) schema_error(where + "." + key, "expected a string");
  return value.get<std::string>();
}

double amount_field(const json& object, const std::string& key,
                    const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_number()) schema_error(where + "." + key, "expected a number");
  const double number = value.get<double>();
  if (!std::isfinite(number) || number < 0.0) {
    schema_error(where + "." + key, "expected a finite non-negative number");
  }
  return number;
}

const json& array_field(const json& object, const std::string& key,
                        const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_array()) schema_error(where + "." + key, "expected an array");
  return value;
}

std::string indexed(const std::string& key, std::size_t i) {
  return key + "[" + std::to_string(i) + "]";
}

FlowDef flow_from_json(const json& item, const std::string& where) {
  require_object(item, where, {"state", "resource", "amount"});
  return {string_field(item, "state", where),
          string_field(item, "resource", where),
          amount_field(item, "amount", where)};
}

json flow_to_json(const FlowDef& flow) {
  return {{"state", flow.state},
          {"resource", flow.resource},
          {"amount", flow.amount}};
}

}  // namespace

GameDesign design_from_json(const json& doc) {
  require_object(doc, "$",
                 {"name", "resources", "actions", "states", "startState",
                  "transitions", "taps", "drains", "converters"});
  GameDesign design;
  if (doc.contains("name")) design.name = string_field(doc, "name", "$");
  // An absent start state is left for validation to report as MISSING_START.
  if (doc.contains("startState")) {
    design.startState = string_field(doc, "startState", "$");
  }

  const json& resources = array_field(doc, "resources", "$");
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const std::string where = indexed("resources", i);
    require_object(resources[i], where, {"id", "capacity"});
    design.resources.push_back({string_field(resources[i], "id", where),
                                amount_field(resources[i], "capacity", where)});
  }

  const json& actions = array_field(doc, "actions", "$");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string where = indexed("actions", i);
    require_object(actions[i], where, {"id", "costs"});
    ActionDef action{string_field(actions[i], "id", where), {}};
    const json& costs = array_field(actions[i], "costs", where);
    for (std::size_t j = 0; j < costs.size(); ++j) {
      const std::string cost_where = where + "." + indexed("costs", j);
      require_object(costs[j], cost_where, {"resource", "amount"});
      action.costs.push_back({string_field(costs[j], "resource", cost_where),
                              amount_field(costs[j], "amount", cost_where)});
    }
    design.actions.push_back(std::move(action));
  }

  const json& states = array_field(doc, "states", "$");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = indexed("states", i);
    require_object(states[i], where, {"id", "importance"});
    design.states.push_back({string_field(states[i], "id", where),
                             amount_field(states[i], "importance", where)});
  }

  const json& transitions = array_field(doc, "transitions", "$");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = indexed("transitions", i);
    require_object(transitions[i], where, {"from", "action", "to"});
    design.transitions.push_back({string_field(transitions[i], "from", where),
                                  string_field(transitions[i], "action", where),
                                  string_field(transitions[i], "to", where)});
  }

  const json& taps = array_field(doc, "taps", "$");
  for (std::size_t i = 0; i < taps.size(); ++i) {
    design.taps.push_back(flow_from_json(taps[i], indexed("taps", i)));
  }
  const json& drains = array_field(doc, "drains", "$");
  for (std::size_t i = 0; i < drains.size(); ++i) {
    design.drains.push_back(flow_from_json(drains[i], indexed("drains", i)));
  }

  const json& converters = array_field(doc, "converters", "$");
  for (std::size_t i = 0; i < converters.size(); ++i) {
    const std::string where = indexed("converters", i);
    const json& item = converters[i];
    require_object(item, where,
                   {"state", "fromResource", "fromAmount", "toResource",
                    "toAmount"});
    design.converters.push_back({string_field(item, "state", where),
                                 string_field(item, "fromResource", where),
                                 amount_field(item, "fromAmount", where),
                                 string_field(item, "toResource", where),
                                 amount_field(item, "toAmount", where)});
  }
  return design;
}

json design_to_json(const GameDesign& input) {
  const GameDesign design = canonicalize(input);
  json doc = json::object();
  doc["name"] = design.name;

  json resources = json::array();
  for (const auto& r : design.resources) {
    resources.push_back({{"id", r.id}, {"capacity", r.capacity}});
  }
  doc["resources"] = std::move(resources);

  json actions = json::array();
  for (const auto& a : design.actions) {
    json costs = json::array();
    for (const auto& c : a.costs) {
      costs.push_back({{"resource", c.resource}, {"amount", c.amount}});
    }
    actions.push_back({{"id", a.id}, {"costs", std::move(costs)}});
  }
  doc["actions"] = std::move(actions);

  json states = json::array();
  for (const auto& s : design.states) {
    states.push_back({{"id", s.id}, {"importance", s.importance}});
  }
  doc["states"] = std::move(states);
  doc["startState"] = design.startState;

  json transitions = json::array();
  for (const auto& t : design.transitions) {
    transitions.push_back({{"from", t.from}, {"action", t.action}, {"to", t.to}});
  }
  doc["transitions"] = std::move(transitions);

  json taps = json::array();
  for (const auto& t : design.taps) taps.push_back(flow_to_json(t));
  doc["taps"] = std::move(taps);
  json drains = json::array();
  for (const auto& d : design.drains) drains.push_back(flow_to_json(d));
  doc["drains"] = std::move(drains);

  json converters = json::array();
  for (const auto& c : design.converters) {
    converters.push_back({{"state", c.state},
                          {"fromResource", c.fromResource},
                          {"fromAmount", c.fromAmount},
                          {"toResource", c.toResource},
                          {"toAmount", c.toAmount}});
  }
  doc["converters"] = std::move(converters);
  return doc;
}

GameDesign load_design(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("PARSE_ERROR: ") + e.what());
  }
  GameDesign design = design_from_json(doc);
  require_valid(design, ErrorCode::ValidationError);
  return design;
}

GameDesign load_design_file(const std::string& path) {
  return load_design(read_text_file(path));
}

std::string save_design(const GameDesign& design) {
  require_valid(design, ErrorCode::ValidationError);
  return design_to_json(design).dump(2) + "\n";
}

void save_design_file(const GameDesign& design, const std::string& path) {
  write_text_file(path, save_design(design));
}

json validation_report_to_json(const ValidationReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    issues.push_back(
        {{"severity", issue.severity == Severity::Error ? "error" : "warning"},
         {"code", issue.code},
         {"message", issue.message},
         {"componentRef", issue.componentRef}});
  }
  return {{"valid", report.valid}, {"issues", std::move(issues)}};
}

std::string design_digest(const GameDesign& design) {
  // FNV-1a over the canonical compact form.
  const std::string text = design_to_json(design).dump();
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "IO_ERROR: cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "IO_ERROR: cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "IO_ERROR: write failed " + path);
}

}  // namespace gamesys
