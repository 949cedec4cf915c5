#include <charconv>
#include <cmath>

#include "gamesys/evolution.hpp"

namespace gamesys {

NumericChromosome NumericChromosome::encode(const GameDesign& design) {
  NumericChromosome c;
  for (const auto& r : design.resources) c.capacities.push_back(r.capacity);
  for (const auto& a : design.actions) {
    for (const auto& cost : a.costs) c.costs.push_back(cost.amount);
  }
  for (const auto& t : design.taps) c.taps.push_back(t.amount);
  for (const auto& d : design.drains) c.drains.push_back(d.amount);
  for (const auto& conv : design.converters) {
    c.converters.push_back(conv.fromAmount);
    c.converters.push_back(conv.toAmount);
  }
  for (const auto& s : design.states) c.importances.push_back(s.importance);
  return c;
}

GameDesign NumericChromosome::decode(const GameDesign& host) const {
  std::size_t n_costs = 0;
  for (const auto& a : host.actions) n_costs += a.costs.size();
  if (capacities.size() != host.resources.size() || costs.size() != n_costs ||
      taps.size() != host.taps.size() || drains.size() != host.drains.size() ||
      converters.size() != 2 * host.converters.size() ||
      importances.size() != host.states.size()) {
    throw Error(ErrorCode::InvalidConfig,
                "INVALID_CONFIG: chromosome does not match host design");
  }
  GameDesign design = host;
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    design.resources[i].capacity = capacities[i];
  }
  std::size_t k = 0;
  for (auto& a : design.actions) {
    for (auto& cost : a.costs) cost.amount = costs[k++];
  }
  for (std::size_t i = 0; i < taps.size(); ++i) design.taps[i].amount = taps[i];
  for (std::size_t i = 0; i < drains.size(); ++i) {
    design.drains[i].amount = drains[i];
  }
  for (std::size_t i = 0; i < design.converters.size(); ++i) {
    design.converters[i].fromAmount = converters[2 * i];
    design.converters[i].toAmount = converters[2 * i + 1];
  }
  for (std::size_t i = 0; i < importances.size(); ++i) {
    design.states[i].importance = importances[i];
  }
  return design;
}

namespace {

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

double parse_number(const std::string& text) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::SchemaError,
                "SCHEMA_ERROR: gene attribute '" + text + "' is not a number");
  }
  return value;
}

void require_arity(const StructuralChromosome::Gene& gene, std::size_t arity,
                   Category category) {
  if (gene.size() != arity) {
    throw Error(ErrorCode::SchemaError,
                "SCHEMA_ERROR: malformed " +
                    std::string(category_name(category)) + " gene");
  }
}

}  // namespace

StructuralChromosome StructuralChromosome::encode(const GameDesign& design) {
  StructuralChromosome c;
  c.name = design.name;
  for (const auto& r : design.resources) {
    c[Category::Resources].push_back({r.id, format_number(r.capacity)});
  }
  for (const auto& a : design.actions) {
    Gene gene{a.id};
    for (const auto& cost : a.costs) {
      gene.push_back(cost.resource);
      gene.push_back(format_number(cost.amount));
    }
    c[Category::Actions].push_back(std::move(gene));
  }
  for (const auto& s : design.states) {
    c[Category::States].push_back({s.id, format_number(s.importance),
                                   s.id == design.startState ? "start" : ""});
  }
  for (const auto& t : design.transitions) {
    c[Category::Transitions].push_back({t.from, t.action, t.to});
  }
  for (const auto& t : design.taps) {
    c[Category::Taps].push_back({t.state, t.resource, format_number(t.amount)});
  }
  for (const auto& d : design.drains) {
    c[Category::Drains].push_back({d.state, d.resource, format_number(d.amount)});
  }
  for (const auto& conv : design.converters) {
    c[Category::Converters].push_back(
        {conv.state, conv.fromResource, format_number(conv.fromAmount),
         conv.toResource, format_number(conv.toAmount)});
  }
  return c;
}

GameDesign StructuralChromosome::decode() const {
  GameDesign design;
  design.name = name;
  for (const auto& gene : (*this)[Category::Resources]) {
    require_arity(gene, 2, Category::Resources);
    design.resources.push_back({gene[0], parse_number(gene[1])});
  }
  for (const auto& gene : (*this)[Category::Actions]) {
    if (gene.empty() || gene.size() % 2 == 0) {
      require_arity(gene, 1, Category::Actions);
    }
    ActionDef action{gene[0], {}};
    for (std::size_t i = 1; i + 1 < gene.size(); i += 2) {
      action.costs.push_back({gene[i], parse_number(gene[i + 1])});
    }
    design.actions.push_back(std::move(action));
  }
  for (const auto& gene : (*this)[Category::States]) {
    require_arity(gene, 3, Category::States);
    design.states.push_back({gene[0], parse_number(gene[1])});
    if (gene[2] == "start") design.startState = gene[0];
  }
  for (const auto& gene : (*this)[Category::Transitions]) {
    require_arity(gene, 3, Category::Transitions);
    design.transitions.push_back({gene[0], gene[1], gene[2]});
  }
  for (const auto& gene : (*this)[Category::Taps]) {
    require_arity(gene, 3, Category::Taps);
    design.taps.push_back({gene[0], gene[1], parse_number(gene[2])});
  }
  for (const auto& gene : (*this)[Category::Drains]) {
    require_arity(gene, 3, Category::Drains);
    design.drains.push_back({gene[0], gene[1], parse_number(gene[2])});
  }
  for (const auto& gene : (*this)[Category::Converters]) {
    require_arity(gene, 5, Category::Converters);
    design.converters.push_back({gene[0], gene[1], parse_number(gene[2]),
                                 gene[3], parse_number(gene[4])});
  }
  return design;
}

}  // namespace gamesys
