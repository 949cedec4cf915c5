// Acceptance gate: one PASS/FAIL line per primary criterion.
//
//   gamesys_acceptance            exit status 1 when any criterion fails
//   gamesys_acceptance --report   exit status 0 once every criterion has run

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gamesys/analysis.hpp"
#include "gamesys/cli.hpp"
#include "gamesys/design_io.hpp"
#include "gamesys/evolution.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace gamesys {
namespace {

// Pinned thresholds.
constexpr double kSingleDesignSeconds = 60.0;
constexpr int kOracleDesigns = 60;
constexpr int kOracleHorizon = 5;
constexpr double kOracleRelativeTolerance = 0.05;
constexpr double kOracleAbsoluteSlack = 1e-9;
constexpr double kOracleSeconds = 120.0;
constexpr int kInventoryDesigns = 10000;
constexpr std::size_t kRangeDesigns = 5000;
constexpr std::uint64_t kStudySeed = 1;
constexpr double kMinPlayableFraction = 0.20;
constexpr double kNoveltyMeanLow = 0.3;
constexpr double kNoveltyMeanHigh = 0.8;
constexpr double kMinNoveltySpike = 0.05;
constexpr double kMinSkewness = 1.0;
constexpr double kMinRepetitionZeroMass = 0.10;
constexpr double kRangeSeconds = 600.0;
constexpr std::size_t kControlGames = 10;
constexpr double kControlWeight = 100.0;
constexpr int kControlPopulation = 12;
constexpr int kControlGenerations = 20;
constexpr double kControllableP = 0.1;
constexpr double kUncontrollableP = 0.2;
constexpr double kControlSeconds = 1800.0;
constexpr int kSweepDesigns = 20;
constexpr int kSignedRankMaxN = 8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Gate {
  int failures = 0;

  void record(bool pass, const std::string& name, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  }
};

std::string fmt(double value, int precision = 3) {
  std::ostringstream s;
  s << std::setprecision(precision) << value;
  return s.str();
}

struct CliOutput {
  int code = 0;
  std::string out;
  double seconds = 0.0;
};

CliOutput run_cli_capture(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gamesys"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  std::istringstream in;
  const auto start = Clock::now();
  CliOutput r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, in);
  r.seconds = seconds_since(start);
  r.out = out.str();
  return r;
}

void determinism(Gate& gate, const std::string& designPath) {
  struct Command {
    std::string name;
    std::vector<std::string> args;
    bool singleDesign;
  };
  const std::string games = std::to_string(kControlGames);
  const std::string pop = std::to_string(kControlPopulation);
  const std::string gens = std::to_string(kControlGenerations);
  const std::vector<Command> commands{
      {"evaluate", {"evaluate", designPath, "--seed", "7", "--format", "json",
                    "--weight", "resourceGains=-100"}, true},
      {"balance", {"balance", designPath, "--seed", "7"}, true},
      {"generate", {"generate", designPath, "--seed", "7"}, true},
      {"expressive-range", {"expressive-range", "--n", std::to_string(kRangeDesigns),
                            "--seed", "1"}, false},
      {"controllability", {"controllability", "--games", games, "--mode", "balancer",
                           "--population", pop, "--generations", gens, "--seed", "1"},
       false},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const auto& command : commands) {
    const CliOutput a = run_cli_capture(command.args);
    const CliOutput b = run_cli_capture(command.args);
    const bool same = a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out;
    const bool fast = !command.singleDesign ||
                      std::max(a.seconds, b.seconds) < kSingleDesignSeconds;
    pass = pass && same && fast;
    detail << command.name << (same ? " identical" : " DIFFERS") << " ("
           << fmt(std::max(a.seconds, b.seconds)) << "s) ";
  }
  gate.record(pass, "determinism", detail.str());
}

void oracle_equivalence(Gate& gate) {
  const auto start = Clock::now();
  Rng rng(kStudySeed);
  int within = 0;
  double worstGap = 0.0;
  for (int i = 0; i < kOracleDesigns; ++i) {
    const GameDesign d = testing::resource_free_design(rng);
    PolicyTrainingConfig cfg;
    cfg.horizon = kOracleHorizon;
    cfg.seed = static_cast<std::uint64_t>(i);
    const auto rollout = train_finite_horizon_policy(d, {}, cfg);
    const testing::HorizonOracle oracle(d);
    const double best = oracle.best_total(kOracleHorizon);
    const double achieved = oracle.total_of(rollout.actions);
    const double gap = best - achieved;
    worstGap = std::max(worstGap, gap / std::max(std::fabs(best), 1.0));
    if (gap <= kOracleRelativeTolerance * std::fabs(best) + kOracleAbsoluteSlack) ++within;
  }
  const double elapsed = seconds_since(start);
  gate.record(within == kOracleDesigns && elapsed < kOracleSeconds, "oracle-equivalence",
              std::to_string(within) + "/" + std::to_string(kOracleDesigns) +
                  " designs within 5% of the optimum, worst relative gap " +
                  fmt(worstGap) + ", " + fmt(elapsed) + "s");
}

void inventory_safety(Gate& gate) {
  const auto start = Clock::now();
  const SamplerCaps caps;
  std::size_t checks = 0, violations = 0;
  for (int i = 0; i < kInventoryDesigns; ++i) {
    Rng rng(derive_seed(kStudySeed, static_cast<std::uint64_t>(i)));
    const GameDesign d = sample_random_design(caps, rng);
    SimConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    simulate(d, {}, cfg, [&](const StepView& view) {
      for (std::size_t r = 0; r < view.inventory.size(); ++r) {
        ++checks;
        const double v = view.inventory[r];
        if (!(v >= 0.0 && v <= view.design->capacity(static_cast<int>(r)))) ++violations;
      }
    });
  }
  gate.record(violations == 0, "inventory-safety",
              std::to_string(kInventoryDesigns) + " designs, " + std::to_string(checks) +
                  " inventory checks, " + std::to_string(violations) + " violations, " +
                  fmt(seconds_since(start)) + "s");
}

double fraction_equal(const std::vector<double>& values, double target) {
  if (values.empty()) return 0.0;
  std::size_t hits = 0;
  for (double v : values) hits += v == target;
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

void expressive_range_shape(Gate& gate) {
  const auto start = Clock::now();
  const auto report = expressive_range(kRangeDesigns, SamplerCaps{}, study_sim_config(), kStudySeed);
  const double elapsed = seconds_since(start);
  const auto columns = playable_columns(report);
  const auto& novelty = columns[static_cast<std::size_t>(Metric::StateNovelty)];
  const double playable =
      static_cast<double>(report.nPlayable) / static_cast<double>(report.nGenerated);
  const double noveltyMean = describe(novelty).mean;
  const double noveltySpike = fraction_equal(novelty, 1.0);
  const double gainsSkew = skewness(columns[static_cast<std::size_t>(Metric::ResourceGains)]);
  const double lossesSkew = skewness(columns[static_cast<std::size_t>(Metric::ResourceLosses)]);
  const double repetitionZero =
      fraction_equal(columns[static_cast<std::size_t>(Metric::StateRepetition)], 0.0);
  const bool pass = playable >= kMinPlayableFraction && noveltyMean >= kNoveltyMeanLow &&
                    noveltyMean <= kNoveltyMeanHigh && noveltySpike >= kMinNoveltySpike &&
                    gainsSkew > kMinSkewness && lossesSkew > kMinSkewness &&
                    repetitionZero >= kMinRepetitionZeroMass && elapsed < kRangeSeconds;
  gate.record(pass, "expressive-range",
              "playable " + fmt(playable) + ", stateNovelty mean " + fmt(noveltyMean) +
                  " with " + fmt(noveltySpike) + " at 1.0, skewness gains " + fmt(gainsSkew) +
                  " losses " + fmt(lossesSkew) + ", stateRepetition " + fmt(repetitionZero) +
                  " at 0, " + fmt(elapsed) + "s");
}

EvolutionConfig control_config() {
  EvolutionConfig cfg;
  cfg.populationSize = kControlPopulation;
  cfg.generations = kControlGenerations;
  cfg.simConfig = study_sim_config();
  cfg.seed = kStudySeed;
  cfg.simConfig.seed = kStudySeed;
  return cfg;
}

void controllability_study(Gate& gate) {
  const auto start = Clock::now();
  const auto report = controllability(kControlGames, -kControlWeight, kControlWeight,
                                      OptimizerMode::Balancer, control_config(), kStudySeed);
  const double elapsed = seconds_since(start);
  const std::vector<Metric> controllable{Metric::GoalImportance,   Metric::ResourceGains,
                                         Metric::ResourceLosses,   Metric::StateRepetition,
                                         Metric::ActionRepetition, Metric::RewardConsistency};
  const std::vector<Metric> uncontrollable{Metric::Interactivity, Metric::Curiosity};
  bool pass = elapsed < kControlSeconds;
  std::ostringstream detail;
  for (Metric m : controllable) {
    const auto& c = report.metrics[static_cast<std::size_t>(m)];
    const bool signOk = c.direction == Direction::Greater ? c.meanDelta > 0.0 : c.meanDelta < 0.0;
    const bool ok = signOk && c.pValue < kControllableP;
    pass = pass && ok;
    detail << metric_name(m) << " " << direction_symbol(c.direction) << " mean "
           << fmt(c.meanDelta) << " p " << fmt(c.pValue) << (ok ? "" : " (miss)") << "; ";
  }
  for (Metric m : uncontrollable) {
    const auto& c = report.metrics[static_cast<std::size_t>(m)];
    const bool ok = c.pValue > kUncontrollableP;
    pass = pass && ok;
    detail << metric_name(m) << " p " << fmt(c.pValue) << (ok ? "" : " (miss)") << "; ";
  }
  detail << fmt(elapsed) << "s";
  gate.record(pass, "controllability", detail.str());
}

void topology_and_validity(Gate& gate, const std::string& designPath) {
  std::size_t balancerChecks = 0, balancerMismatches = 0;
  std::size_t generatorChecks = 0, generatorInvalid = 0;

  std::vector<GameDesign> hosts{testing::shop_design(), testing::sprint_design(),
                                testing::cycle_design()};
  const SamplerCaps caps;
  for (std::uint64_t k = 0; hosts.size() < 3 + kSweepDesigns; ++k) {
    Rng rng(derive_seed(kStudySeed ^ 0xacce, k));
    GameDesign d = sample_random_design(caps, rng);
    if (simulate(d, {}, study_sim_config()).playable) hosts.push_back(std::move(d));
  }

  EvolutionConfig cfg = control_config();
  ArgmaxSelector selector;
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const GameDesign& host = hosts[i];
    const GameDesign topology = topology_of(host);
    cfg.seed = i;
    cfg.weights = MetricWeights{};
    cfg.weights.set(kAllMetrics[i % kMetricCount], i % 2 ? kControlWeight : -kControlWeight);

    EvolutionHooks balanceHooks;
    balanceHooks.onGeneration = [&](const GenerationStats&, std::span<const Individual> pop) {
      for (const auto& ind : pop) {
        ++balancerChecks;
        if (topology_of(ind.design) != topology) ++balancerMismatches;
      }
    };
    const auto balanced = balance(host, cfg, selector, balanceHooks);
    ++balancerChecks;
    if (topology_of(balanced.bestDesign) != topology) ++balancerMismatches;

    EvolutionHooks generateHooks;
    generateHooks.onGeneration = [&](const GenerationStats&, std::span<const Individual> pop) {
      for (const auto& ind : pop) {
        ++generatorChecks;
        if (!validate_design(ind.design).valid) ++generatorInvalid;
      }
    };
    if (i % 3 == 0) cfg.frozenCategories = {Category::Resources};
    const auto generated = generate(host, cfg, selector, generateHooks);
    cfg.frozenCategories.clear();
    ++generatorChecks;
    if (!validate_design(generated.bestDesign).valid) ++generatorInvalid;
  }

  // The balance output of the determinism run.
  const CliOutput cli = run_cli_capture({"balance", designPath, "--seed", "7"});
  ++balancerChecks;
  const GameDesign original = load_design_file(designPath);
  if (cli.code != 0 ||
      topology_of(design_from_json(nlohmann::json::parse(cli.out).at("bestDesign"))) !=
          topology_of(original)) {
    ++balancerMismatches;
  }

  gate.record(balancerMismatches == 0 && generatorInvalid == 0, "topology-and-validity",
              std::to_string(balancerChecks - balancerMismatches) + "/" +
                  std::to_string(balancerChecks) + " balancer designs topology-identical, " +
                  std::to_string(generatorChecks - generatorInvalid) + "/" +
                  std::to_string(generatorChecks) + " generator designs valid");
}

void signed_rank_kernel(Gate& gate) {
  const auto start = Clock::now();
  std::size_t cases = 0, mismatches = 0;
  auto check = [&](const std::vector<double>& deltas) {
    for (Direction dir : {Direction::Greater, Direction::Less}) {
      ++cases;
      if (signed_rank_test(deltas, dir) !=
          testing::signed_rank_by_enumeration(deltas, dir == Direction::Greater)) {
        ++mismatches;
      }
    }
  };
  // Every vector of length 1..8 over {-2, -1, 0, 1, 2}: zeros, ties and signs.
  const std::vector<double> grid{-2.0, -1.0, 0.0, 1.0, 2.0};
  for (int n = 1; n <= kSignedRankMaxN; ++n) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
    std::vector<double> deltas(static_cast<std::size_t>(n));
    while (true) {
      for (int i = 0; i < n; ++i) deltas[i] = grid[digits[i]];
      check(deltas);
      int pos = 0;
      while (pos < n && ++digits[pos] == grid.size()) digits[pos++] = 0;
      if (pos == n) break;
    }
  }
  // Continuous values, mostly without ties.
  Rng rng(kStudySeed);
  std::normal_distribution<double> normal(0.3, 1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<double> deltas(1 + trial % kSignedRankMaxN);
    for (auto& d : deltas) d = normal(rng);
    check(deltas);
  }
  gate.record(mismatches == 0, "signed-rank-kernel",
              std::to_string(cases - mismatches) + "/" + std::to_string(cases) +
                  " cases equal to exhaustive enumeration, " + fmt(seconds_since(start)) + "s");
}

}  // namespace
}  // namespace gamesys

int main(int argc, char** argv) {
  using namespace gamesys;
  const bool reportOnly = argc > 1 && std::strcmp(argv[1], "--report") == 0;

  const auto dir = std::filesystem::temp_directory_path() / "gamesys_acceptance";
  std::filesystem::create_directories(dir);
  const std::string designPath = (dir / "shop.json").string();
  save_design_file(testing::shop_design(), designPath);

  Gate gate;
  determinism(gate, designPath);
  oracle_equivalence(gate);
  inventory_safety(gate);
  expressive_range_shape(gate);
  controllability_study(gate);
  topology_and_validity(gate, designPath);
  signed_rank_kernel(gate);
  std::filesystem::remove_all(dir);

  std::cout << gate.failures << " of 7 criteria failed" << std::endl;
  return reportOnly || gate.failures == 0 ? 0 : 1;
}
