#include "gamesys/config_io.hpp"

#include <string>

#include "gamesys/error.hpp"

namespace gamesys {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: " + what);
}

void require_object(const json& doc, const char* what) {
  if (!doc.is_object()) fail(std::string(what) + " must be an object");
}

// Reads doc[key] into out when present.
template <typename T>
bool read(const json& doc, const std::string& key, T& out) {
  const auto it = doc.find(key);
  if (it == doc.end()) return false;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) fail("'" + key + "' must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail("'" + key + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) fail("'" + key + "' must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (it->is_number_integer() && !it->is_number_unsigned() &&
            it->get<long long>() < 0) {
          fail("'" + key + "' must be non-negative");
        }
      }
    }
    out = it->get<T>();
  } catch (const json::exception&) {
    fail("'" + key + "' has the wrong type");
  }
  return true;
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known,
                    const char* what) {
  for (const auto& [key, value] : doc.items()) {
    bool found = false;
    for (const char* k : known) found |= key == k;
    if (!found) fail(std::string("unknown ") + what + " field '" + key + "'");
  }
}

}  // namespace

MetricWeights weights_from_json(const json& doc, const MetricWeights& base) {
  require_object(doc, "weights");
  MetricWeights weights = base;
  for (const auto& [name, value] : doc.items()) {
    if (!metric_from_name(name)) {
      throw Error(ErrorCode::UnknownMetric, "UNKNOWN_METRIC: '" + name + "'");
    }
    if (!value.is_number()) fail("weight '" + name + "' must be a number");
    weights.set(name, value.get<double>());
  }
  return weights;
}

json weights_to_json(const MetricWeights& weights) {
  json doc = json::object();
  for (Metric m : kAllMetrics) doc[std::string(metric_name(m))] = weights[m];
  return doc;
}

SimConfig sim_config_from_json(const json& doc, const SimConfig& base) {
  require_object(doc, "simConfig");
  reject_unknown(doc,
                 {"maxEpochs", "learningRate", "discount", "explorationStart",
                  "explorationDecay", "explorationFloor", "minPlayableSteps",
                  "seed"},
                 "simConfig");
  SimConfig cfg = base;
  read(doc, "maxEpochs", cfg.maxEpochs);
  read(doc, "learningRate", cfg.learningRate);
  read(doc, "discount", cfg.discount);
  read(doc, "explorationStart", cfg.explorationStart);
  read(doc, "explorationDecay", cfg.explorationDecay);
  read(doc, "explorationFloor", cfg.explorationFloor);
  read(doc, "minPlayableSteps", cfg.minPlayableSteps);
  read(doc, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

json sim_config_to_json(const SimConfig& cfg) {
  return {{"maxEpochs", cfg.maxEpochs},
          {"learningRate", cfg.learningRate},
          {"discount", cfg.discount},
          {"explorationStart", cfg.explorationStart},
          {"explorationDecay", cfg.explorationDecay},
          {"explorationFloor", cfg.explorationFloor},
          {"minPlayableSteps", cfg.minPlayableSteps},
          {"seed", cfg.seed}};
}

SamplerCaps caps_from_json(const json& doc, const SamplerCaps& base) {
  require_object(doc, "caps");
  reject_unknown(doc,
                 {"maxStates", "maxActions", "maxResources", "maxTransitions",
                  "maxTaps", "maxDrains", "maxConverters", "amountMin",
                  "amountMax", "capacityMin", "capacityMax", "importanceMin",
                  "importanceMax"},
                 "caps");
  SamplerCaps caps = base;
  read(doc, "maxStates", caps.maxStates);
  read(doc, "maxActions", caps.maxActions);
  read(doc, "maxResources", caps.maxResources);
  read(doc, "maxTransitions", caps.maxTransitions);
  read(doc, "maxTaps", caps.maxTaps);
  read(doc, "maxDrains", caps.maxDrains);
  read(doc, "maxConverters", caps.maxConverters);
  read(doc, "amountMin", caps.amountMin);
  read(doc, "amountMax", caps.amountMax);
  read(doc, "capacityMin", caps.capacityMin);
  read(doc, "capacityMax", caps.capacityMax);
  read(doc, "importanceMin", caps.importanceMin);
  read(doc, "importanceMax", caps.importanceMax);
  caps.validate();
  return caps;
}

json caps_to_json(const SamplerCaps& caps) {
  return {{"maxStates", caps.maxStates},
          {"maxActions", caps.maxActions},
          {"maxResources", caps.maxResources},
          {"maxTransitions", caps.maxTransitions},
          {"maxTaps", caps.maxTaps},
          {"maxDrains", caps.maxDrains},
          {"maxConverters", caps.maxConverters},
          {"amountMin", caps.amountMin},
          {"amountMax", caps.amountMax},
          {"capacityMin", caps.capacityMin},
          {"capacityMax", caps.capacityMax},
          {"importanceMin", caps.importanceMin},
          {"importanceMax", caps.importanceMax}};
}

EvolutionConfig evolution_config_from_json(const json& doc,
                                           const EvolutionConfig& base) {
  require_object(doc, "config");
  reject_unknown(doc,
                 {"populationSize", "generations", "mutationRate",
                  "tournamentSize", "eliteCount", "humanEveryK",
                  "candidatesShown", "frozenCategories", "seed", "simConfig",
                  "weights", "caps"},
                 "config");
  EvolutionConfig cfg = base;
  read(doc, "populationSize", cfg.populationSize);
  read(doc, "generations", cfg.generations);
  read(doc, "mutationRate", cfg.mutationRate);
  read(doc, "tournamentSize", cfg.tournamentSize);
  read(doc, "eliteCount", cfg.eliteCount);
  read(doc, "humanEveryK", cfg.humanEveryK);
  read(doc, "candidatesShown", cfg.candidatesShown);
  read(doc, "seed", cfg.seed);
  if (const auto it = doc.find("frozenCategories"); it != doc.end()) {
    if (!it->is_array()) fail("frozenCategories must be an array");
    cfg.frozenCategories.clear();
    for (const auto& name : *it) {
      if (!name.is_string()) fail("frozenCategories entries must be strings");
      const auto category = category_from_name(name.get<std::string>());
      if (!category) fail("unknown category '" + name.get<std::string>() + "'");
      cfg.frozenCategories.insert(*category);
    }
  }
  if (const auto it = doc.find("simConfig"); it != doc.end()) {
    cfg.simConfig = sim_config_from_json(*it, cfg.simConfig);
  }
  if (const auto it = doc.find("weights"); it != doc.end()) {
    cfg.weights = weights_from_json(*it, cfg.weights);
  }
  if (const auto it = doc.find("caps"); it != doc.end()) {
    cfg.caps = caps_from_json(*it, cfg.caps);
  }
  cfg.validate();
  return cfg;
}

json evolution_config_to_json(const EvolutionConfig& cfg) {
  json frozen = json::array();
  for (Category c : cfg.frozenCategories) frozen.push_back(category_name(c));
  return {{"populationSize", cfg.populationSize},
          {"generations", cfg.generations},
          {"mutationRate", cfg.mutationRate},
          {"tournamentSize", cfg.tournamentSize},
          {"eliteCount", cfg.eliteCount},
          {"humanEveryK", cfg.humanEveryK},
          {"candidatesShown", cfg.candidatesShown},
          {"frozenCategories", std::move(frozen)},
          {"seed", cfg.seed},
          {"simConfig", sim_config_to_json(cfg.simConfig)},
          {"weights", weights_to_json(cfg.weights)},
          {"caps", caps_to_json(cfg.caps)}};
}

}  // namespace gamesys
