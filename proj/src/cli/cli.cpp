#include "gamesys/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "gamesys/analysis.hpp"
#include "gamesys/config_io.hpp"
#include "gamesys/design_io.hpp"
#include "gamesys/error.hpp"
#include "gamesys/evolution.hpp"
#include "gamesys/service.hpp"

namespace gamesys {

using nlohmann::json;

namespace {

// Raised for command-line misuse detected after parsing.
struct UsageError : std::runtime_error {
  UsageError(std::string code, const std::string& message)
      : std::runtime_error(message), code(std::move(code)) {}
  std::string code;
};

struct Options {
  bool json = false;

  std::string design;
  std::vector<std::string> weights;
  std::optional<std::uint64_t> seed;
  std::optional<int> maxEpochs;
  std::string simConfigFile;
  std::string output;
  std::string format;

  // evolution
  bool interactive = false;
  std::vector<std::string> freeze;
  std::string evolutionConfigFile;
  std::optional<int> population;
  std::optional<int> generations;
  std::optional<double> mutationRate;
  std::optional<int> humanEveryK;

  // sampling and studies
  std::string capsFile;
  std::optional<int> maxStates, maxActions, maxResources, maxTransitions;
  std::size_t n = 1;
  std::size_t games = 10;
  std::string mode = "balancer";
  double wLow = -100.0;
  double wHigh = 100.0;

  // serve
  std::string host;
  std::optional<int> port;
  std::string dataDir;
};

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "PARSE_ERROR: " + path + ": " + e.what());
  }
}

MetricWeights parse_weights(const std::vector<std::string>& pairs) {
  MetricWeights weights;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw UsageError("USAGE_ERROR", "--weight expects metric=value, got '" + pair + "'");
    }
    const std::string name = pair.substr(0, eq);
    const std::string text = pair.substr(eq + 1);
    if (!metric_from_name(name)) {
      throw Error(ErrorCode::UnknownMetric, "UNKNOWN_METRIC: '" + name + "'");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw UsageError("USAGE_ERROR", "weight for " + name + " is not a number: '" + text + "'");
    }
    weights.set(name, value);
  }
  return weights;
}

SimConfig build_sim(const Options& o, SimConfig base) {
  if (!o.simConfigFile.empty()) base = sim_config_from_json(read_json_file(o.simConfigFile), base);
  if (o.maxEpochs) base.maxEpochs = *o.maxEpochs;
  if (o.seed) base.seed = *o.seed;
  base.validate();
  return base;
}

SamplerCaps build_caps(const Options& o, SamplerCaps caps) {
  if (!o.capsFile.empty()) caps = caps_from_json(read_json_file(o.capsFile), caps);
  if (o.maxStates) caps.maxStates = *o.maxStates;
  if (o.maxActions) caps.maxActions = *o.maxActions;
  if (o.maxResources) caps.maxResources = *o.maxResources;
  if (o.maxTransitions) caps.maxTransitions = *o.maxTransitions;
  caps.validate();
  return caps;
}

EvolutionConfig build_evolution(const Options& o, EvolutionConfig cfg) {
  if (!o.evolutionConfigFile.empty()) {
    cfg = evolution_config_from_json(read_json_file(o.evolutionConfigFile), cfg);
  }
  if (o.population) cfg.populationSize = *o.population;
  if (o.generations) cfg.generations = *o.generations;
  if (o.mutationRate) cfg.mutationRate = *o.mutationRate;
  if (o.humanEveryK) cfg.humanEveryK = *o.humanEveryK;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.weights.empty()) cfg.weights = parse_weights(o.weights);
  cfg.simConfig = build_sim(o, cfg.simConfig);
  // --seed drives both the GA and its fitness simulations.
  if (o.seed) cfg.simConfig.seed = *o.seed;
  cfg.caps = build_caps(o, cfg.caps);
  for (const auto& name : o.freeze) {
    const auto category = category_from_name(name);
    if (!category) throw UsageError("USAGE_ERROR", "unknown category '" + name + "'");
    cfg.frozenCategories.insert(*category);
  }
  cfg.validate();
  return cfg;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty()) {
    out << text;
  } else {
    write_text_file(o.output, text);
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const json doc = read_json_file(o.design);
  const GameDesign design = design_from_json(doc);
  const ValidationReport report = validate_design(design);
  out << validation_report_to_json(report).dump(2) << "\n";
  return report.valid ? kExitSuccess : kExitFailure;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const MetricWeights weights = parse_weights(o.weights);
  const SimConfig sim = build_sim(o, SimConfig{});
  const GameDesign design = load_design_file(o.design);
  const Evaluation evaluation = evaluate(design, weights, sim);
  if (o.format == "json") {
    emit(o, out,
         json{{"seed", sim.seed},
              {"weights", weights_to_json(weights)},
              {"report", report_to_json(evaluation.report)},
              {"summary", evaluation.summary}}
                 .dump(2) +
             "\n");
  } else {
    emit(o, out, evaluation.summary);
  }
  return kExitSuccess;
}

int cmd_evolve(const Options& o, bool generator, std::ostream& out,
               std::ostream& err, std::istream& in) {
  if (!generator && !o.freeze.empty()) {
    throw UsageError("USAGE_ERROR", "--freeze applies to generate only");
  }
  const EvolutionConfig cfg = build_evolution(o, EvolutionConfig{});
  const GameDesign design = load_design_file(o.design);
  ArgmaxSelector automatic;
  ConsoleSelector console(in, err);
  CandidateSelector& selector =
      o.interactive ? static_cast<CandidateSelector&>(console) : automatic;
  const EvolutionResult result = generator ? generate(design, cfg, selector)
                                           : balance(design, cfg, selector);
  if (!o.output.empty()) save_design_file(result.bestDesign, o.output);
  out << evolution_result_to_json(result).dump(2) << "\n";
  return kExitSuccess;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const SamplerCaps caps = build_caps(o, SamplerCaps{});
  const std::uint64_t seed = o.seed.value_or(0);
  json designs = json::array();
  for (std::size_t i = 0; i < o.n; ++i) {
    Rng rng(derive_seed(seed, i));
    GameDesign design = sample_random_design(caps, rng);
    design.name = "sample" + std::to_string(i);
    designs.push_back(design_to_json(design));
  }
  emit(o, out, designs.dump(2) + "\n");
  return kExitSuccess;
}

ReportFormat report_format(const Options& o) {
  return o.format.empty() ? ReportFormat::Csv : format_from_name(o.format);
}

int cmd_expressive_range(const Options& o, std::ostream& out) {
  const SamplerCaps caps = build_caps(o, SamplerCaps{});
  const SimConfig sim = build_sim(o, study_sim_config());
  const auto report = expressive_range(o.n, caps, sim, o.seed.value_or(0));
  emit(o, out, render(report, report_format(o)));
  return kExitSuccess;
}

int cmd_controllability(const Options& o, std::ostream& out) {
  EvolutionConfig base;
  base.populationSize = 12;
  base.generations = 20;
  base.simConfig = study_sim_config();
  const OptimizerMode mode = mode_from_name(o.mode);
  const EvolutionConfig cfg = build_evolution(o, base);
  const auto report =
      controllability(o.games, o.wLow, o.wHigh, mode, cfg, o.seed.value_or(0));
  emit(o, out, render(report, report_format(o)));
  return kExitSuccess;
}

std::atomic<service::Server*> active_server{nullptr};

extern "C" void stop_server(int) {
  if (auto* server = active_server.load()) server->stop();
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value && *value ? value : fallback;
}

int cmd_serve(const Options& o, std::ostream& out) {
  service::ServerOptions options;
  options.host = o.host.empty() ? env_or("GAMESYS_HOST", "127.0.0.1") : o.host;
  options.port = o.port ? *o.port : std::stoi(env_or("GAMESYS_PORT", "8080"));
  options.dataDir = o.dataDir.empty() ? env_or("GAMESYS_DATA_DIR", "gamesys-data") : o.dataDir;
  options.defaultSim = build_sim(o, SimConfig{});
  options.defaultEvolution = build_evolution(o, EvolutionConfig{});
  service::Server server(options);
  const int port = server.bind();
  out << "listening on http://" << options.host << ":" << port << std::endl;
  active_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  server.run();
  active_server = nullptr;
  return kExitSuccess;
}

void report_error(const Options& o, std::ostream& err, const std::string& code,
                  const std::string& message, const json& details = nullptr) {
  if (o.json) {
    json doc = {{"code", code}, {"message", message}};
    if (!details.is_null()) doc["details"] = details;
    err << doc.dump() << "\n";
  } else {
    err << "error: " << message << "\n";
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownMetric: return kExitUsage;
    default: return kExitFailure;
  }
}

void add_design(CLI::App* cmd, Options& o) {
  cmd->add_option("design", o.design, "Design file (JSON)")->required();
}

void add_seed(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
}

void add_sim(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-epochs", o.maxEpochs, "Actions per play-through");
  cmd->add_option("--sim-config", o.simConfigFile, "Simulation settings (JSON)");
}

void add_caps(CLI::App* cmd, Options& o) {
  cmd->add_option("--caps", o.capsFile, "Component caps (JSON)");
  cmd->add_option("--max-states", o.maxStates);
  cmd->add_option("--max-actions", o.maxActions);
  cmd->add_option("--max-resources", o.maxResources);
  cmd->add_option("--max-transitions", o.maxTransitions);
}

void add_evolution(CLI::App* cmd, Options& o) {
  cmd->add_option("--weight", o.weights, "Metric weight as metric=value")->take_all();
  cmd->add_option("--evolution-config", o.evolutionConfigFile, "GA settings (JSON)");
  cmd->add_option("--population", o.population);
  cmd->add_option("--generations", o.generations);
  cmd->add_option("--mutation-rate", o.mutationRate);
  cmd->add_option("--human-every", o.humanEveryK, "Generations between checkpoints");
  add_seed(cmd, o);
  add_sim(cmd, o);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, std::istream& in) {
  Options o;
  CLI::App app{"Game system design toolkit", "gamesys"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Machine-readable errors on stderr");

  auto* validate = app.add_subcommand("validate", "Check a design file");
  add_design(validate, o);

  auto* eval = app.add_subcommand("evaluate", "Simulate a play-through");
  add_design(eval, o);
  eval->add_option("--weight", o.weights, "Metric weight as metric=value")->take_all();
  add_seed(eval, o);
  add_sim(eval, o);
  eval->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  eval->add_option("-o,--output", o.output, "Write output here");

  auto* bal = app.add_subcommand("balance", "Tune a design's numbers");
  add_design(bal, o);
  add_evolution(bal, o);
  bal->add_flag("--interactive", o.interactive, "Choose candidates on the console");
  bal->add_option("-o,--output", o.output, "Write the best design here");

  auto* gen = app.add_subcommand("generate", "Evolve a design's structure");
  add_design(gen, o);
  add_evolution(gen, o);
  add_caps(gen, o);
  gen->add_flag("--interactive", o.interactive, "Choose candidates on the console");
  gen->add_option("--freeze", o.freeze, "Category left untouched")
      ->check(CLI::IsMember({"resources", "actions", "states", "transitions",
                             "taps", "drains", "converters"}));
  gen->add_option("-o,--output", o.output, "Write the best design here");

  auto* sample = app.add_subcommand("sample", "Draw random designs");
  sample->add_option("--n", o.n, "Number of designs")->check(CLI::PositiveNumber);
  add_seed(sample, o);
  add_caps(sample, o);
  sample->add_option("-o,--output", o.output, "Write output here");

  auto* er = app.add_subcommand("expressive-range", "Metric distributions of random designs");
  er->add_option("--n", o.n, "Number of designs")->required()->check(CLI::PositiveNumber);
  add_seed(er, o);
  add_sim(er, o);
  add_caps(er, o);
  er->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  er->add_option("-o,--output", o.output, "Write output here");

  auto* ctl = app.add_subcommand("controllability", "Metric-weight controllability study");
  ctl->add_option("--games", o.games, "Number of games")->check(CLI::Range(2, 100000));
  ctl->add_option("--mode", o.mode, "balancer or generator")
      ->check(CLI::IsMember({"balancer", "generator"}));
  ctl->add_option("--w-low", o.wLow, "Low target weight");
  ctl->add_option("--w-high", o.wHigh, "High target weight");
  add_evolution(ctl, o);
  add_caps(ctl, o);
  ctl->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  ctl->add_option("-o,--output", o.output, "Write output here");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", o.host, "Listen address (GAMESYS_HOST)");
  serve->add_option("--port", o.port, "Listen port (GAMESYS_PORT)");
  serve->add_option("--data-dir", o.dataDir, "Design storage (GAMESYS_DATA_DIR)");
  add_evolution(serve, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (o.json) {
      report_error(o, err, "USAGE_ERROR", e.what());
    } else {
      app.exit(e, out, err);
    }
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*eval) return cmd_evaluate(o, out);
    if (*bal) return cmd_evolve(o, false, out, err, in);
    if (*gen) return cmd_evolve(o, true, out, err, in);
    if (*sample) return cmd_sample(o, out);
    if (*er) return cmd_expressive_range(o, out);
    if (*ctl) return cmd_controllability(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    report_error(o, err, e.code, e.what());
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    report_error(o, err, "VALIDATION_ERROR", e.what(),
                 validation_report_to_json(e.report()));
    if (!o.json) out << validation_report_to_json(e.report()).dump(2) << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    report_error(o, err, std::string(to_string(e.code())), e.what());
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace gamesys
