#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gamesys/evolution.hpp"
#include "gamesys/metrics.hpp"
#include "gamesys/sampler.hpp"
#include "gamesys/simulation.hpp"
#include "gamesys/stats.hpp"

namespace gamesys {

inline constexpr std::size_t kHistogramBins = 40;

// Independent seed for the index-th unit of work under a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Simulation settings used by both studies: a short horizon of 12 actions.
SimConfig study_sim_config();

struct DesignRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool playable = false;
  std::size_t pathLength = 0;
  MetricVector meanMetrics;

  bool operator==(const DesignRow&) const = default;
};

struct ExpressiveRangeReport {
  std::size_t nGenerated = 0;
  std::size_t nPlayable = 0;
  std::uint64_t seed = 0;
  // Over playable designs only, in fixed metric order.
  std::array<Descriptive, kMetricCount> stats{};
  std::array<Histogram, kMetricCount> histograms{};
  // One row per generated design.
  std::vector<DesignRow> rows;

  bool operator==(const ExpressiveRangeReport&) const = default;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

ExpressiveRangeReport expressive_range(std::size_t n, const SamplerCaps& caps,
                                       const SimConfig& simCfg,
                                       std::uint64_t seed,
                                       const Progress& progress = {});

// Mean metrics of playable designs, one vector per metric.
std::array<std::vector<double>, kMetricCount> playable_columns(
    const ExpressiveRangeReport& report);

enum class OptimizerMode { Balancer, Generator };

std::string_view mode_name(OptimizerMode mode);
// Throws Error(InvalidConfig).
OptimizerMode mode_from_name(std::string_view name);

struct MetricControl {
  Metric metric = Metric::GoalImportance;
  Direction direction = Direction::Greater;
  std::vector<double> scoresLow;
  std::vector<double> scoresHigh;
  // scoresHigh - scoresLow, one per game.
  std::vector<double> deltas;
  double meanDelta = 0.0;
  double stdDev = 0.0;
  double pValue = 0.5;

  bool operator==(const MetricControl&) const = default;
};

struct ControllabilityReport {
  OptimizerMode mode = OptimizerMode::Balancer;
  std::size_t nGames = 0;
  double wLow = -100.0;
  double wHigh = 100.0;
  std::uint64_t seed = 0;
  std::array<MetricControl, kMetricCount> metrics{};

  bool operator==(const ControllabilityReport&) const = default;
};

// Direction a metric is expected to move when its weight rises.
Direction expected_direction(Metric metric);

// Samples nGames playable designs and, for every metric, optimizes each game
// twice (target weight wLow then wHigh, others 1, automated selection). The
// optimized designs are scored by one all-ones simulation with
// evoCfg.simConfig. Human checkpoints are disabled.
ControllabilityReport controllability(std::size_t nGames, double wLow,
                                      double wHigh, OptimizerMode mode,
                                      const EvolutionConfig& evoCfg,
                                      std::uint64_t seed,
                                      const Progress& progress = {});

enum class ReportFormat { Csv, Json };

// Throws Error(InvalidConfig).
ReportFormat format_from_name(std::string_view name);

nlohmann::json to_json(const ExpressiveRangeReport& report);
nlohmann::json to_json(const ControllabilityReport& report);
// Throw Error(SchemaError).
ExpressiveRangeReport expressive_range_from_json(const nlohmann::json& doc);
ControllabilityReport controllability_from_json(const nlohmann::json& doc);

std::string to_csv(const ExpressiveRangeReport& report);
std::string to_csv(const ControllabilityReport& report);

std::string render(const ExpressiveRangeReport& report, ReportFormat format);
std::string render(const ControllabilityReport& report, ReportFormat format);

// Throws Error(IoError).
void export_report(const ExpressiveRangeReport& report, ReportFormat format,
                   const std::filesystem::path& path);
void export_report(const ControllabilityReport& report, ReportFormat format,
                   const std::filesystem::path& path);

}  // namespace gamesys
