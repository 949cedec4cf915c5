#include "gamesys/analysis.hpp"

#include <sstream>

#include "gamesys/design_io.hpp"
#include "gamesys/error.hpp"

namespace gamesys {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over a mix of both inputs
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SimConfig study_sim_config() {
  SimConfig cfg;
  cfg.maxEpochs = 12;
  return cfg;
}

ExpressiveRangeReport expressive_range(std::size_t n, const SamplerCaps& caps,
                                       const SimConfig& simCfg,
                                       std::uint64_t seed,
                                       const Progress& progress) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: n must be positive");
  caps.validate();
  simCfg.validate();
  ExpressiveRangeReport report;
  report.nGenerated = n;
  report.seed = seed;
  report.rows.reserve(n);
  const MetricWeights ones;
  for (std::size_t i = 0; i < n; ++i) {
    DesignRow row;
    row.index = i;
    row.seed = derive_seed(seed, i);
    Rng rng(row.seed);
    const GameDesign design = sample_random_design(caps, rng);
    SimConfig cfg = simCfg;
    cfg.seed = derive_seed(row.seed, 0);
    const PlaythroughReport play = simulate(design, ones, cfg);
    row.playable = play.playable;
    row.pathLength = play.statePath.size();
    row.meanMetrics = play.meanMetrics;
    report.nPlayable += row.playable;
    report.rows.push_back(row);
    if (progress) progress(i + 1, n);
  }
  const auto columns = playable_columns(report);
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    report.stats[m] = describe(columns[m]);
    report.histograms[m] = histogram(columns[m], kHistogramBins);
  }
  return report;
}

std::array<std::vector<double>, kMetricCount> playable_columns(
    const ExpressiveRangeReport& report) {
  std::array<std::vector<double>, kMetricCount> columns;
  for (const auto& row : report.rows) {
    if (!row.playable) continue;
    const auto values = row.meanMetrics.values();
    for (std::size_t m = 0; m < kMetricCount; ++m) columns[m].push_back(values[m]);
  }
  return columns;
}

std::string_view mode_name(OptimizerMode mode) {
  return mode == OptimizerMode::Balancer ? "balancer" : "generator";
}

OptimizerMode mode_from_name(std::string_view name) {
  if (name == "balancer") return OptimizerMode::Balancer;
  if (name == "generator") return OptimizerMode::Generator;
  throw Error(ErrorCode::InvalidConfig,
              "INVALID_CONFIG: unknown mode '" + std::string(name) + "'");
}

Direction expected_direction(Metric metric) {
  return is_penalty(metric) ? Direction::Less : Direction::Greater;
}

namespace {

GameDesign optimize(const GameDesign& design, OptimizerMode mode,
                    const EvolutionConfig& cfg) {
  ArgmaxSelector selector;
  return mode == OptimizerMode::Balancer
             ? balance(design, cfg, selector).bestDesign
             : generate(design, cfg, selector).bestDesign;
}

}  // namespace

ControllabilityReport controllability(std::size_t nGames, double wLow,
                                      double wHigh, OptimizerMode mode,
                                      const EvolutionConfig& evoCfg,
                                      std::uint64_t seed,
                                      const Progress& progress) {
  if (nGames < 2) {
    throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: nGames must be at least 2");
  }
  evoCfg.validate();
  ControllabilityReport report;
  report.mode = mode;
  report.nGames = nGames;
  report.wLow = wLow;
  report.wHigh = wHigh;
  report.seed = seed;

  const MetricWeights ones;
  std::vector<GameDesign> games;
  for (std::uint64_t k = 0; games.size() < nGames; ++k) {
    Rng rng(derive_seed(seed, k));
    GameDesign design = sample_random_design(evoCfg.caps, rng);
    if (simulate(design, ones, evoCfg.simConfig).playable) {
      design.name = "game" + std::to_string(games.size());
      games.push_back(std::move(design));
    }
  }

  const std::size_t total = nGames * kMetricCount;
  std::size_t done = 0;
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    MetricControl& control = report.metrics[m];
    control.metric = kAllMetrics[m];
    control.direction = expected_direction(control.metric);
    for (std::size_t g = 0; g < nGames; ++g) {
      EvolutionConfig cfg = evoCfg;
      cfg.humanEveryK = 0;
      cfg.seed = derive_seed(seed ^ 0x5eedULL, g * kMetricCount + m);
      double scores[2];
      const double arm_weights[2] = {wLow, wHigh};
      for (int arm = 0; arm < 2; ++arm) {
        cfg.weights = MetricWeights{};
        cfg.weights.set(control.metric, arm_weights[arm]);
        const GameDesign best = optimize(games[g], mode, cfg);
        scores[arm] = simulate(best, ones, evoCfg.simConfig).meanMetrics[control.metric];
      }
      control.scoresLow.push_back(scores[0]);
      control.scoresHigh.push_back(scores[1]);
      control.deltas.push_back(scores[1] - scores[0]);
      if (progress) progress(++done, total);
    }
    control.meanDelta = describe(control.deltas).mean;
    control.stdDev = standard_deviation(control.deltas);
    control.pValue = signed_rank_test(control.deltas, control.direction);
  }
  return report;
}

ReportFormat format_from_name(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorCode::InvalidConfig,
              "INVALID_CONFIG: unknown format '" + std::string(name) + "'");
}

namespace {

json metric_names() {
  json names = json::array();
  for (Metric m : kAllMetrics) names.push_back(metric_name(m));
  return names;
}

json metrics_array(const MetricVector& v) {
  json out = json::array();
  for (double x : v.values()) out.push_back(x);
  return out;
}

std::string number(double x) { return json(x).dump(); }

[[noreturn]] void schema_fail(const std::string& what) {
  throw Error(ErrorCode::SchemaError, "SCHEMA_ERROR: " + what);
}

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    schema_fail(std::string("missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    schema_fail(std::string("field '") + key + "' has the wrong type");
  }
}

MetricVector metrics_from(const json& doc, const char* key) {
  const auto values = field<std::vector<double>>(doc, key);
  if (values.size() != kMetricCount) schema_fail(std::string(key) + " needs 10 entries");
  std::array<double, kMetricCount> a{};
  std::copy(values.begin(), values.end(), a.begin());
  return MetricVector::from_values(a);
}

Metric metric_at(const json& entry, std::size_t m) {
  const auto name = field<std::string>(entry, "metric");
  const auto metric = metric_from_name(name);
  if (!metric || *metric != kAllMetrics[m]) schema_fail("metric order mismatch at " + name);
  return *metric;
}

}  // namespace

json to_json(const ExpressiveRangeReport& report) {
  json stats = json::array();
  json hists = json::array();
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const auto& s = report.stats[m];
    stats.push_back({{"metric", metric_name(kAllMetrics[m])},
                     {"min", s.min},
                     {"mean", s.mean},
                     {"max", s.max},
                     {"variance", s.variance}});
    hists.push_back({{"metric", metric_name(kAllMetrics[m])},
                     {"edges", report.histograms[m].edges},
                     {"counts", report.histograms[m].counts}});
  }
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"index", row.index},
                    {"seed", row.seed},
                    {"playable", row.playable},
                    {"pathLength", row.pathLength},
                    {"meanMetrics", metrics_array(row.meanMetrics)}});
  }
  return {{"kind", "expressiveRange"},
          {"nGenerated", report.nGenerated},
          {"nPlayable", report.nPlayable},
          {"seed", report.seed},
          {"metrics", metric_names()},
          {"stats", std::move(stats)},
          {"histograms", std::move(hists)},
          {"rows", std::move(rows)}};
}

ExpressiveRangeReport expressive_range_from_json(const json& doc) {
  if (field<std::string>(doc, "kind") != "expressiveRange") schema_fail("wrong report kind");
  ExpressiveRangeReport report;
  report.nGenerated = field<std::size_t>(doc, "nGenerated");
  report.nPlayable = field<std::size_t>(doc, "nPlayable");
  report.seed = field<std::uint64_t>(doc, "seed");
  const auto stats = field<json>(doc, "stats");
  const auto hists = field<json>(doc, "histograms");
  if (!stats.is_array() || stats.size() != kMetricCount || !hists.is_array() ||
      hists.size() != kMetricCount) {
    schema_fail("stats and histograms need one entry per metric");
  }
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    metric_at(stats[m], m);
    metric_at(hists[m], m);
    report.stats[m] = {field<double>(stats[m], "min"), field<double>(stats[m], "mean"),
                       field<double>(stats[m], "max"),
                       field<double>(stats[m], "variance")};
    report.histograms[m] = {field<std::vector<double>>(hists[m], "edges"),
                            field<std::vector<int>>(hists[m], "counts")};
  }
  for (const auto& r : field<json>(doc, "rows")) {
    DesignRow row;
    row.index = field<std::size_t>(r, "index");
    row.seed = field<std::uint64_t>(r, "seed");
    row.playable = field<bool>(r, "playable");
    row.pathLength = field<std::size_t>(r, "pathLength");
    row.meanMetrics = metrics_from(r, "meanMetrics");
    report.rows.push_back(row);
  }
  return report;
}

json to_json(const ControllabilityReport& report) {
  json metrics = json::array();
  for (const auto& c : report.metrics) {
    metrics.push_back({{"metric", metric_name(c.metric)},
                       {"direction", std::string(1, direction_symbol(c.direction))},
                       {"scoresLow", c.scoresLow},
                       {"scoresHigh", c.scoresHigh},
                       {"deltas", c.deltas},
                       {"meanDelta", c.meanDelta},
                       {"stdDev", c.stdDev},
                       {"pValue", c.pValue}});
  }
  return {{"kind", "controllability"},
          {"mode", mode_name(report.mode)},
          {"nGames", report.nGames},
          {"wLow", report.wLow},
          {"wHigh", report.wHigh},
          {"seed", report.seed},
          {"metrics", std::move(metrics)}};
}

ControllabilityReport controllability_from_json(const json& doc) {
  if (field<std::string>(doc, "kind") != "controllability") schema_fail("wrong report kind");
  ControllabilityReport report;
  try {
    report.mode = mode_from_name(field<std::string>(doc, "mode"));
  } catch (const Error&) {
    schema_fail("unknown mode");
  }
  report.nGames = field<std::size_t>(doc, "nGames");
  report.wLow = field<double>(doc, "wLow");
  report.wHigh = field<double>(doc, "wHigh");
  report.seed = field<std::uint64_t>(doc, "seed");
  const auto metrics = field<json>(doc, "metrics");
  if (!metrics.is_array() || metrics.size() != kMetricCount) {
    schema_fail("metrics needs one entry per metric");
  }
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    MetricControl& c = report.metrics[m];
    c.metric = metric_at(metrics[m], m);
    const auto dir = field<std::string>(metrics[m], "direction");
    if (dir != "+" && dir != "-") schema_fail("direction must be + or -");
    c.direction = dir == "+" ? Direction::Greater : Direction::Less;
    c.scoresLow = field<std::vector<double>>(metrics[m], "scoresLow");
    c.scoresHigh = field<std::vector<double>>(metrics[m], "scoresHigh");
    c.deltas = field<std::vector<double>>(metrics[m], "deltas");
    c.meanDelta = field<double>(metrics[m], "meanDelta");
    c.stdDev = field<double>(metrics[m], "stdDev");
    c.pValue = field<double>(metrics[m], "pValue");
    if (c.deltas.size() != report.nGames || c.scoresLow.size() != report.nGames ||
        c.scoresHigh.size() != report.nGames) {
      schema_fail("delta lists must have nGames entries");
    }
  }
  return report;
}

std::string to_csv(const ExpressiveRangeReport& report) {
  std::ostringstream out;
  out << "index,seed,playable,pathLength";
  for (Metric m : kAllMetrics) out << "," << metric_name(m);
  out << "\n";
  for (const auto& row : report.rows) {
    out << row.index << "," << row.seed << "," << (row.playable ? "true" : "false")
        << "," << row.pathLength;
    for (double v : row.meanMetrics.values()) out << "," << number(v);
    out << "\n";
  }
  return out.str();
}

std::string to_csv(const ControllabilityReport& report) {
  std::ostringstream out;
  out << "mode,metric,direction,game,scoreLow,scoreHigh,delta,meanDelta,stdDev,pValue\n";
  for (const auto& c : report.metrics) {
    for (std::size_t g = 0; g < c.deltas.size(); ++g) {
      out << mode_name(report.mode) << "," << metric_name(c.metric) << ","
          << direction_symbol(c.direction) << "," << g << ","
          << number(c.scoresLow[g]) << "," << number(c.scoresHigh[g]) << ","
          << number(c.deltas[g]) << "," << number(c.meanDelta) << ","
          << number(c.stdDev) << "," << number(c.pValue) << "\n";
    }
  }
  return out.str();
}

std::string render(const ExpressiveRangeReport& report, ReportFormat format) {
  return format == ReportFormat::Csv ? to_csv(report) : to_json(report).dump(2) + "\n";
}

std::string render(const ControllabilityReport& report, ReportFormat format) {
  return format == ReportFormat::Csv ? to_csv(report) : to_json(report).dump(2) + "\n";
}

void export_report(const ExpressiveRangeReport& report, ReportFormat format,
                   const std::filesystem::path& path) {
  write_text_file(path.string(), render(report, format));
}

void export_report(const ControllabilityReport& report, ReportFormat format,
                   const std::filesystem::path& path) {
  write_text_file(path.string(), render(report, format));
}

}  // namespace gamesys
