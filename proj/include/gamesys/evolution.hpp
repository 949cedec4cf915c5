#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gamesys/design.hpp"
#include "gamesys/metrics.hpp"
#include "gamesys/sampler.hpp"
#include "gamesys/simulation.hpp"

namespace gamesys {

// Balance genes: one list of numbers per component category, addressed by
// list position in the host design. Costs are flattened in action order,
// converters as (fromAmount, toAmount) pairs.
struct NumericChromosome {
  std::vector<double> capacities;
  std::vector<double> costs;
  std::vector<double> taps;
  std::vector<double> drains;
  std::vector<double> converters;
  std::vector<double> importances;

  static NumericChromosome encode(const GameDesign& design);
  // Writes the genes back into a design with the host's topology. Throws
  // Error(InvalidConfig) when list lengths do not match the host.
  GameDesign decode(const GameDesign& host) const;

  bool operator==(const NumericChromosome&) const = default;
};

// Generator genes: per category, a variable-length list of components, each
// a tuple of string attributes.
//   resources:   id, capacity
//   actions:     id, (resource, amount)*
//   states:      id, importance, "start" | ""
//   transitions: from, action, to
//   taps/drains: state, resource, amount
//   converters:  state, fromResource, fromAmount, toResource, toAmount
struct StructuralChromosome {
  using Gene = std::vector<std::string>;
  std::string name;
  std::array<std::vector<Gene>, 7> genes;

  std::vector<Gene>& operator[](Category c) {
    return genes[static_cast<std::size_t>(c)];
  }
  const std::vector<Gene>& operator[](Category c) const {
    return genes[static_cast<std::size_t>(c)];
  }

  static StructuralChromosome encode(const GameDesign& design);
  // Throws Error(SchemaError) on malformed genes.
  GameDesign decode() const;

  bool operator==(const StructuralChromosome&) const = default;
};

struct EvolutionConfig {
  int populationSize = 20;
  int generations = 50;
  double mutationRate = 0.2;
  int tournamentSize = 3;
  int eliteCount = 1;
  // 0 disables human checkpoints.
  int humanEveryK = 5;
  int candidatesShown = 4;
  std::set<Category> frozenCategories;
  std::uint64_t seed = 0;
  SimConfig simConfig;
  MetricWeights weights;
  // Component caps for the structural generator.
  SamplerCaps caps;

  // Throws Error(InvalidConfig).
  void validate() const;
};

struct GenerationStats {
  int generation = 0;
  double bestFitness = 0.0;
  double meanFitness = 0.0;
};

struct EvolutionResult {
  GameDesign bestDesign;
  double bestFitness = 0.0;
  std::vector<GenerationStats> history;
  int evaluations = 0;
  // Set when the run stopped early (selector abort or stop request).
  bool partial = false;
};

nlohmann::json evolution_result_to_json(const EvolutionResult& result);

struct Candidate {
  GameDesign design;
  double fitness = 0.0;
  PlaythroughDigest digest;
};

// Consulted at human checkpoints. Returns the chosen candidate index, or
// nullopt to abort the run. Candidates arrive sorted by fitness, best first.
class CandidateSelector {
 public:
  virtual ~CandidateSelector() = default;
  virtual std::optional<std::size_t> choose(
      int generation, std::span<const Candidate> candidates) = 0;
};

class ArgmaxSelector : public CandidateSelector {
 public:
  std::optional<std::size_t> choose(
      int generation, std::span<const Candidate> candidates) override;
};

// Prints candidate digests and reads an index; "q" or end of input aborts.
class ConsoleSelector : public CandidateSelector {
 public:
  ConsoleSelector(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::optional<std::size_t> choose(
      int generation, std::span<const Candidate> candidates) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

struct Individual {
  GameDesign design;
  double fitness = 0.0;
};

struct EvolutionHooks {
  // Called after each generation's population is evaluated.
  std::function<void(const GenerationStats&, std::span<const Individual>)>
      onGeneration;
  // Polled before each generation; true ends the run as partial.
  std::function<bool()> stopRequested;
};

// Total reward of one simulated play-through with the given seed.
double fitness(const GameDesign& design, const MetricWeights& weights,
               const SimConfig& simConfig, std::uint64_t seed);

// Perturbs each balance gene with probability `rate` by a Gaussian of
// standard deviation max(0.2 * |value|, 0.5), clamped at zero. Genes of
// frozen categories are left alone. Importances are never touched.
GameDesign mutate_numbers(const GameDesign& design, double rate, Rng& rng,
                          const std::set<Category>& frozen = {});

// Applies one random structural edit outside the frozen categories and
// within caps. Throws Error(NoLegalEdit) when no edit is possible.
GameDesign mutate_structure(const GameDesign& design,
                            const std::set<Category>& frozen, Rng& rng,
                            const SamplerCaps& caps);

// Mutation-only GA over numbers; topology never changes.
EvolutionResult balance(const GameDesign& design, const EvolutionConfig& cfg,
                        CandidateSelector& selector,
                        const EvolutionHooks& hooks = {});

// Mutation-only GA over structure (plus numbers half of the time).
EvolutionResult generate(const GameDesign& design, const EvolutionConfig& cfg,
                         CandidateSelector& selector,
                         const EvolutionHooks& hooks = {});

}  // namespace gamesys
