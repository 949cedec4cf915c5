#pragma once

#include <nlohmann/json.hpp>

#include "gamesys/evolution.hpp"
#include "gamesys/metrics.hpp"
#include "gamesys/sampler.hpp"
#include "gamesys/simulation.hpp"

namespace gamesys {

// JSON forms of run configuration. The *_from_json functions overlay the
// fields present in `doc` onto `base`; unknown fields and wrong types raise
// Error(InvalidConfig), unknown metric names Error(UnknownMetric).

// {"metricName": weight, ...}; omitted metrics keep their base weight.
MetricWeights weights_from_json(const nlohmann::json& doc,
                                const MetricWeights& base = {});
nlohmann::json weights_to_json(const MetricWeights& weights);

SimConfig sim_config_from_json(const nlohmann::json& doc,
                               const SimConfig& base = {});
nlohmann::json sim_config_to_json(const SimConfig& cfg);

SamplerCaps caps_from_json(const nlohmann::json& doc,
                           const SamplerCaps& base = {});
nlohmann::json caps_to_json(const SamplerCaps& caps);

EvolutionConfig evolution_config_from_json(const nlohmann::json& doc,
                                           const EvolutionConfig& base = {});
nlohmann::json evolution_config_to_json(const EvolutionConfig& cfg);

}  // namespace gamesys
