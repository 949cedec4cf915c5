#include "gamesys/evolution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "gamesys/design_io.hpp"

namespace gamesys {

using nlohmann::json;

void EvolutionConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: " + what);
  };
  if (populationSize < 2) fail("populationSize must be at least 2");
  if (generations < 0) fail("generations must be non-negative");
  if (!(mutationRate >= 0.0 && mutationRate <= 1.0)) {
    fail("mutationRate must be in [0, 1]");
  }
  if (tournamentSize < 1 || tournamentSize > populationSize) {
    fail("tournamentSize must be in [1, populationSize]");
  }
  if (eliteCount < 0 || eliteCount >= populationSize) {
    fail("eliteCount must be in [0, populationSize)");
  }
  if (humanEveryK < 0) fail("humanEveryK must be non-negative");
  if (candidatesShown < 1) fail("candidatesShown must be positive");
  simConfig.validate();
  caps.validate();
}

json evolution_result_to_json(const EvolutionResult& result) {
  json history = json::array();
  for (const auto& h : result.history) {
    history.push_back({{"generation", h.generation},
                       {"bestFitness", h.bestFitness},
                       {"meanFitness", h.meanFitness}});
  }
  return {{"bestFitness", result.bestFitness},
          {"evaluations", result.evaluations},
          {"partial", result.partial},
          {"history", std::move(history)},
          {"bestDesign", design_to_json(result.bestDesign)}};
}

std::optional<std::size_t> ArgmaxSelector::choose(
    int, std::span<const Candidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].fitness > candidates[best].fitness) best = i;
  }
  return best;
}

std::optional<std::size_t> ConsoleSelector::choose(
    int generation, std::span<const Candidate> candidates) {
  out_ << "Generation " << generation << ": choose a favorite candidate\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    out_ << "  [" << i << "] fitness " << c.fitness << ", path length "
         << c.digest.pathLength << ", top states:";
    for (const auto& [state, visits] : c.digest.topStates) {
      out_ << " " << state << "x" << visits;
    }
    out_ << "\n      mean:";
    for (Metric m : kAllMetrics) {
      out_ << " " << metric_name(m) << "=" << c.digest.meanMetrics[m];
    }
    out_ << "\n";
  }
  std::string line;
  while (true) {
    out_ << "index (q to abort)> " << std::flush;
    if (!std::getline(in_, line)) return std::nullopt;
    if (line == "q" || line == "quit") return std::nullopt;
    std::size_t index = 0;
    auto [end, ec] =
        std::from_chars(line.data(), line.data() + line.size(), index);
    if (ec == std::errc{} && end == line.data() + line.size() &&
        index < candidates.size()) {
      return index;
    }
    out_ << "expected an index between 0 and " << candidates.size() - 1
         << "\n";
  }
}

double fitness(const GameDesign& design, const MetricWeights& weights,
               const SimConfig& simConfig, std::uint64_t seed) {
  SimConfig cfg = simConfig;
  cfg.seed = seed;
  return simulate(design, weights, cfg).totalReward;
}

GameDesign mutate_numbers(const GameDesign& design, double rate, Rng& rng,
                          const std::set<Category>& frozen) {
  require_valid(design, ErrorCode::InvalidDesign);
  NumericChromosome genes = NumericChromosome::encode(design);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto mutate = [&](std::vector<double>& values, Category category) {
    if (frozen.contains(category)) return;
    for (double& v : values) {
      if (unit(rng) >= rate) continue;
      const double sigma = std::max(0.2 * std::abs(v), 0.5);
      v = std::max(0.0, v + std::normal_distribution<double>(0.0, sigma)(rng));
    }
  };
  mutate(genes.capacities, Category::Resources);
  mutate(genes.costs, Category::Actions);
  mutate(genes.taps, Category::Taps);
  mutate(genes.drains, Category::Drains);
  mutate(genes.converters, Category::Converters);
  return genes.decode(design);
}

namespace {

using Gene = StructuralChromosome::Gene;

enum class Edit {
  AddState,
  AddAction,
  AddResource,
  AddTransition,
  AddTap,
  AddDrain,
  AddConverter,
  RewireTransition,
  ReattachTap,
  ReattachDrain,
  ReattachConverter,
  RerandomizeNumber,
};

Category target_of(Edit edit) {
  switch (edit) {
    case Edit::AddState: return Category::States;
    case Edit::AddAction: return Category::Actions;
    case Edit::AddResource: return Category::Resources;
    case Edit::AddTransition:
    case Edit::RewireTransition: return Category::Transitions;
    case Edit::AddTap:
    case Edit::ReattachTap: return Category::Taps;
    case Edit::AddDrain:
    case Edit::ReattachDrain: return Category::Drains;
    case Edit::AddConverter:
    case Edit::ReattachConverter: return Category::Converters;
    case Edit::RerandomizeNumber: break;
  }
  return Category::States;
}

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

// A numeric attribute inside the chromosome: category, gene, attribute.
struct NumberSlot {
  Category category;
  std::size_t gene;
  std::size_t attribute;
};

class StructureEditor {
 public:
  StructureEditor(const GameDesign& design, const std::set<Category>& frozen,
                  Rng& rng, const SamplerCaps& caps)
      : chromosome_(StructuralChromosome::encode(design)),
        frozen_(frozen),
        rng_(rng),
        caps_(caps) {
    for (const auto& g : chromosome_[Category::States]) states_.push_back(g[0]);
    for (const auto& g : chromosome_[Category::Actions]) actions_.push_back(g[0]);
    for (const auto& g : chromosome_[Category::Resources]) {
      resources_.push_back(g[0]);
    }
    for (const auto& g : chromosome_[Category::Transitions]) {
      used_keys_.emplace(g[0], g[1]);
    }
  }

  std::vector<Edit> legal_edits() const {
    std::vector<Edit> edits;
    auto open = [&](Category c) {
      return !frozen_.contains(c) &&
             component_count_of(c) < static_cast<std::size_t>(caps_.cap(c));
    };
    auto editable = [&](Category c) {
      return !frozen_.contains(c) && component_count_of(c) > 0 &&
             states_.size() >= 2;
    };
    if (open(Category::States)) edits.push_back(Edit::AddState);
    if (open(Category::Actions)) edits.push_back(Edit::AddAction);
    if (open(Category::Resources)) edits.push_back(Edit::AddResource);
    if (open(Category::Transitions) && !actions_.empty() &&
        used_keys_.size() < states_.size() * actions_.size()) {
      edits.push_back(Edit::AddTransition);
    }
    if (open(Category::Taps) && !resources_.empty()) edits.push_back(Edit::AddTap);
    if (open(Category::Drains) && !resources_.empty()) {
      edits.push_back(Edit::AddDrain);
    }
    if (open(Category::Converters) && resources_.size() >= 2) {
      edits.push_back(Edit::AddConverter);
    }
    if (editable(Category::Transitions)) edits.push_back(Edit::RewireTransition);
    if (editable(Category::Taps)) edits.push_back(Edit::ReattachTap);
    if (editable(Category::Drains)) edits.push_back(Edit::ReattachDrain);
    if (editable(Category::Converters)) edits.push_back(Edit::ReattachConverter);
    if (!number_slots().empty()) edits.push_back(Edit::RerandomizeNumber);
    return edits;
  }

  GameDesign apply(Edit edit) {
    switch (edit) {
      case Edit::AddState:
        chromosome_[Category::States].push_back(
            {fresh_id("s", states_), number(sampling::importance(caps_, rng_)),
             ""});
        break;
      case Edit::AddAction: add_action(); break;
      case Edit::AddResource:
        chromosome_[Category::Resources].push_back(
            {fresh_id("r", resources_), number(sampling::capacity(caps_, rng_))});
        break;
      case Edit::AddTransition: add_transition(); break;
      case Edit::AddTap:
      case Edit::AddDrain: {
        const std::string state = pick(states_);
        const std::string resource = pick(resources_);
        chromosome_[target_of(edit)].push_back(
            {state, resource, number(sampling::amount(caps_, rng_))});
        break;
      }
      case Edit::AddConverter: add_converter(); break;
      case Edit::RewireTransition: {
        auto& gene = pick_gene(Category::Transitions);
        gene[2] = pick_other(states_, gene[2]);
        break;
      }
      case Edit::ReattachTap:
      case Edit::ReattachDrain:
      case Edit::ReattachConverter: {
        auto& gene = pick_gene(target_of(edit));
        gene[0] = pick_other(states_, gene[0]);
        break;
      }
      case Edit::RerandomizeNumber: rerandomize(); break;
    }
    return chromosome_.decode();
  }

 private:
  std::size_t component_count_of(Category c) const {
    return chromosome_[c].size();
  }

  std::string number(double value) const { return format_number(value); }

  const std::string& pick(const std::vector<std::string>& ids) {
    return ids[sampling::index(ids.size(), rng_)];
  }

  std::string pick_other(const std::vector<std::string>& ids,
                         const std::string& current) {
    std::vector<std::string> others;
    for (const auto& id : ids) {
      if (id != current) others.push_back(id);
    }
    return others[sampling::index(others.size(), rng_)];
  }

  Gene& pick_gene(Category c) {
    auto& genes = chromosome_[c];
    return genes[sampling::index(genes.size(), rng_)];
  }

  static std::string fresh_id(const std::string& prefix,
                              const std::vector<std::string>& taken) {
    for (std::size_t k = 0;; ++k) {
      std::string id = prefix + std::to_string(k);
      if (std::find(taken.begin(), taken.end(), id) == taken.end()) return id;
    }
  }

  void add_action() {
    Gene gene{fresh_id("a", actions_)};
    std::vector<std::string> pool = resources_;
    const int n_costs = std::uniform_int_distribution<int>(
        0, std::min<int>(2, static_cast<int>(pool.size())))(rng_);
    std::shuffle(pool.begin(), pool.end(), rng_);
    for (int i = 0; i < n_costs; ++i) {
      gene.push_back(pool[i]);
      gene.push_back(number(sampling::amount(caps_, rng_)));
    }
    chromosome_[Category::Actions].push_back(std::move(gene));
  }

  void add_transition() {
    std::vector<std::pair<std::string, std::string>> free_keys;
    for (const auto& s : states_) {
      for (const auto& a : actions_) {
        if (!used_keys_.contains({s, a})) free_keys.emplace_back(s, a);
      }
    }
    const auto& [from, action] = free_keys[sampling::index(free_keys.size(), rng_)];
    const std::string to = pick(states_);
    chromosome_[Category::Transitions].push_back({from, action, to});
  }

  void add_converter() {
    const std::string state = pick(states_);
    const std::size_t from = sampling::index(resources_.size(), rng_);
    std::size_t to = sampling::index(resources_.size() - 1, rng_);
    if (to >= from) ++to;
    const std::string from_amount = number(sampling::amount(caps_, rng_));
    const std::string to_amount = number(sampling::amount(caps_, rng_));
    chromosome_[Category::Converters].push_back(
        {state, resources_[from], from_amount, resources_[to], to_amount});
  }

  std::vector<NumberSlot> number_slots() const {
    std::vector<NumberSlot> slots;
    auto add = [&](Category c, std::initializer_list<std::size_t> attributes) {
      if (frozen_.contains(c)) return;
      for (std::size_t g = 0; g < chromosome_[c].size(); ++g) {
        for (std::size_t a : attributes) slots.push_back({c, g, a});
      }
    };
    add(Category::Resources, {1});
    add(Category::States, {1});
    add(Category::Taps, {2});
    add(Category::Drains, {2});
    add(Category::Converters, {2, 4});
    if (!frozen_.contains(Category::Actions)) {
      const auto& genes = chromosome_[Category::Actions];
      for (std::size_t g = 0; g < genes.size(); ++g) {
        for (std::size_t a = 2; a < genes[g].size(); a += 2) {
          slots.push_back({Category::Actions, g, a});
        }
      }
    }
    return slots;
  }

  void rerandomize() {
    const auto slots = number_slots();
    const NumberSlot slot = slots[sampling::index(slots.size(), rng_)];
    double value = 0.0;
    switch (slot.category) {
      case Category::Resources: value = sampling::capacity(caps_, rng_); break;
      case Category::States: value = sampling::importance(caps_, rng_); break;
      default: value = sampling::amount(caps_, rng_); break;
    }
    chromosome_[slot.category][slot.gene][slot.attribute] = number(value);
  }

  StructuralChromosome chromosome_;
  const std::set<Category>& frozen_;
  Rng& rng_;
  const SamplerCaps& caps_;
  std::vector<std::string> states_;
  std::vector<std::string> actions_;
  std::vector<std::string> resources_;
  std::set<std::pair<std::string, std::string>> used_keys_;
};

}  // namespace

GameDesign mutate_structure(const GameDesign& design,
                            const std::set<Category>& frozen, Rng& rng,
                            const SamplerCaps& caps) {
  require_valid(design, ErrorCode::InvalidDesign);
  StructureEditor editor(design, frozen, rng, caps);
  const std::vector<Edit> edits = editor.legal_edits();
  if (edits.empty()) {
    throw Error(ErrorCode::NoLegalEdit,
                "NO_LEGAL_EDIT: every category is frozen or saturated");
  }
  GameDesign result = editor.apply(edits[sampling::index(edits.size(), rng)]);
  require_valid(result, ErrorCode::InvalidDesign);
  return result;
}

namespace {

using Offspring = std::function<GameDesign(const GameDesign&, Rng&)>;

class GeneticSearch {
 public:
  GeneticSearch(const EvolutionConfig& cfg, CandidateSelector& selector,
                const EvolutionHooks& hooks, Offspring offspring)
      : cfg_(cfg),
        selector_(selector),
        hooks_(hooks),
        offspring_(std::move(offspring)),
        rng_(cfg.seed) {}

  EvolutionResult run(const GameDesign& original) {
    require_valid(original, ErrorCode::InvalidDesign);
    cfg_.validate();

    std::vector<Individual> population;
    population.push_back({original, evaluate(original)});
    if (cfg_.generations > 0) {
      for (int i = 1; i < cfg_.populationSize; ++i) {
        GameDesign child = offspring_(original, rng_);
        const double f = evaluate(child);
        population.push_back({std::move(child), f});
      }
    }
    record(0, population);

    for (int g = 1; g <= cfg_.generations; ++g) {
      if (hooks_.stopRequested && hooks_.stopRequested()) {
        result_.partial = true;
        break;
      }
      sort_by_fitness(population);
      std::vector<Individual> next;
      if (cfg_.humanEveryK > 0 && g % cfg_.humanEveryK == 0) {
        std::optional<Individual> chosen = consult_selector(g, population);
        if (!chosen) {
          result_.partial = true;
          break;
        }
        next.push_back(*chosen);
        while (static_cast<int>(next.size()) < cfg_.populationSize) {
          next.push_back(spawn(chosen->design));
        }
      } else {
        for (int e = 0; e < cfg_.eliteCount; ++e) next.push_back(population[e]);
        while (static_cast<int>(next.size()) < cfg_.populationSize) {
          next.push_back(spawn(tournament(population).design));
        }
      }
      population = std::move(next);
      record(g, population);
    }
    return std::move(result_);
  }

 private:
  double evaluate(const GameDesign& design) {
    ++result_.evaluations;
    return fitness(design, cfg_.weights, cfg_.simConfig, cfg_.simConfig.seed);
  }

  Individual spawn(const GameDesign& parent) {
    GameDesign child = offspring_(parent, rng_);
    const double f = evaluate(child);
    return {std::move(child), f};
  }

  static void sort_by_fitness(std::vector<Individual>& population) {
    std::stable_sort(population.begin(), population.end(),
                     [](const Individual& a, const Individual& b) {
                       return a.fitness > b.fitness;
                     });
  }

  const Individual& tournament(const std::vector<Individual>& population) {
    const Individual* best = nullptr;
    for (int i = 0; i < cfg_.tournamentSize; ++i) {
      const Individual& contender =
          population[sampling::index(population.size(), rng_)];
      if (!best || contender.fitness > best->fitness) best = &contender;
    }
    return *best;
  }

  std::optional<Individual> consult_selector(
      int generation, const std::vector<Individual>& sorted) {
    const std::size_t shown =
        std::min<std::size_t>(cfg_.candidatesShown, sorted.size());
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < shown; ++i) {
      SimConfig sim = cfg_.simConfig;
      const PlaythroughReport report =
          simulate(sorted[i].design, cfg_.weights, sim);
      candidates.push_back(
          {sorted[i].design, sorted[i].fitness, digest_of(report)});
    }
    const auto choice = selector_.choose(generation, candidates);
    if (!choice || *choice >= shown) return std::nullopt;
    return sorted[*choice];
  }

  void record(int generation, const std::vector<Individual>& population) {
    GenerationStats stats{generation, population.front().fitness, 0.0};
    for (const auto& ind : population) {
      stats.bestFitness = std::max(stats.bestFitness, ind.fitness);
      stats.meanFitness += ind.fitness;
      if (!has_best_ || ind.fitness > result_.bestFitness) {
        has_best_ = true;
        result_.bestFitness = ind.fitness;
        result_.bestDesign = ind.design;
      }
    }
    stats.meanFitness /= static_cast<double>(population.size());
    result_.history.push_back(stats);
    if (hooks_.onGeneration) hooks_.onGeneration(stats, population);
  }

  const EvolutionConfig& cfg_;
  CandidateSelector& selector_;
  const EvolutionHooks& hooks_;
  Offspring offspring_;
  Rng rng_;
  EvolutionResult result_;
  bool has_best_ = false;
};

}  // namespace

EvolutionResult balance(const GameDesign& design, const EvolutionConfig& cfg,
                        CandidateSelector& selector,
                        const EvolutionHooks& hooks) {
  auto offspring = [&cfg](const GameDesign& parent, Rng& rng) {
    return mutate_numbers(parent, cfg.mutationRate, rng);
  };
  return GeneticSearch(cfg, selector, hooks, offspring).run(design);
}

EvolutionResult generate(const GameDesign& design, const EvolutionConfig& cfg,
                         CandidateSelector& selector,
                         const EvolutionHooks& hooks) {
  auto offspring = [&cfg](const GameDesign& parent, Rng& rng) {
    GameDesign child = parent;
    try {
      child = mutate_structure(parent, cfg.frozenCategories, rng, cfg.caps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoLegalEdit) throw;
    }
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) {
      child = mutate_numbers(child, cfg.mutationRate, rng, cfg.frozenCategories);
    }
    return child;
  };
  return GeneticSearch(cfg, selector, hooks, offspring).run(design);
}

}  // namespace gamesys
