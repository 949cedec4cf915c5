#include "gamesys/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "playthrough.hpp"

namespace gamesys {

using nlohmann::json;

void SimConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, "INVALID_CONFIG: " + what);
  };
  if (maxEpochs < 1) fail("maxEpochs must be positive");
  if (!(learningRate > 0.0 && learningRate <= 1.0)) {
    fail("learningRate must be in (0, 1]");
  }
  if (!(discount >= 0.0 && discount < 1.0)) fail("discount must be in [0, 1)");
  if (!(explorationStart >= 0.0 && explorationStart <= 1.0)) {
    fail("explorationStart must be in [0, 1]");
  }
  if (!(explorationDecay > 0.0 && explorationDecay <= 1.0)) {
    fail("explorationDecay must be in (0, 1]");
  }
  if (!(explorationFloor >= 0.0 && explorationFloor <= 1.0)) {
    fail("explorationFloor must be in [0, 1]");
  }
  if (minPlayableSteps < 1) fail("minPlayableSteps must be positive");
}

std::string_view termination_name(Termination reason) {
  return reason == Termination::MaxEpochs ? "maxEpochs" : "noValidActions";
}

double reward_consistency(std::span<const double> rewardHistory) {
  const std::size_t recent = rewardHistory.size() / 2;
  double sum = 0.0;
  for (std::size_t i = rewardHistory.size() - recent; i < rewardHistory.size();
       ++i) {
    sum += rewardHistory[i];
  }
  return sum;
}

MetricVector compute_step_metrics(
    const GameDesign& design, std::string_view currentState,
    const Inventory& inventory, double gains, double losses,
    const std::map<std::string, int>& visitHistory,
    const std::map<std::string, int>& actionHistory,
    std::span<const double> rewardHistory,
    const std::optional<std::string>& arrivingAction) {
  const CompiledDesign compiled(design);
  auto s = compiled.state_index(currentState);
  if (!s) {
    throw Error(ErrorCode::UnknownState,
                "UNKNOWN_STATE: '" + std::string(currentState) + "'");
  }
  int action = -1;
  if (arrivingAction) {
    auto a = compiled.action_index(*arrivingAction);
    if (!a) {
      throw Error(ErrorCode::UnknownAction,
                  "UNKNOWN_ACTION: '" + *arrivingAction + "'");
    }
    action = *a;
  }
  std::vector<int> visits(compiled.state_count(), 0);
  for (const auto& [id, count] : visitHistory) {
    if (auto i = compiled.state_index(id)) visits[*i] = count;
  }
  std::vector<int> uses(compiled.action_count(), 0);
  for (const auto& [id, count] : actionHistory) {
    if (auto i = compiled.action_index(id)) uses[*i] = count;
  }
  const std::vector<double> amounts = compiled.to_vector(inventory);
  std::vector<int> valid;
  compiled.available_actions(*s, amounts, valid);
  return detail::measure_step(compiled, *s, action, {gains, losses}, visits,
                              uses, reward_consistency(rewardHistory),
                              valid.size());
}

namespace {

// Returns a position in [0, count). q(i) is the value of the i-th candidate.
template <typename QOf>
std::size_t epsilon_greedy(std::size_t count, QOf q, double epsilon, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
  }
  double best = q(0);
  for (std::size_t i = 1; i < count; ++i) best = std::max(best, q(i));
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < count; ++i) {
    if (q(i) == best) ties.push_back(i);
  }
  if (ties.size() == 1) return ties.front();
  return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
}

}  // namespace

std::string select_action(const QRow& qRow, std::span<const std::string> valid,
                          double epsilon, Rng& rng) {
  if (valid.empty()) {
    throw Error(ErrorCode::NoValidActions, "NO_VALID_ACTIONS");
  }
  auto q = [&](std::size_t i) {
    auto it = qRow.find(valid[i]);
    return it == qRow.end() ? 0.0 : it->second;
  };
  return valid[epsilon_greedy(valid.size(), q, epsilon, rng)];
}

void q_update(QTable& q, const std::string& state, const std::string& action,
              double reward, const std::string& nextState,
              std::span<const std::string> validNext, double learningRate,
              double discount) {
  double best_next = 0.0;
  if (!validNext.empty()) {
    const QRow& next_row = q[nextState];
    best_next = -std::numeric_limits<double>::infinity();
    for (const auto& a : validNext) {
      auto it = next_row.find(a);
      best_next = std::max(best_next, it == next_row.end() ? 0.0 : it->second);
    }
  }
  double& value = q[state][action];
  value += learningRate * (reward + discount * best_next - value);
}

PlaythroughReport simulate(const GameDesign& design,
                           const MetricWeights& weights, const SimConfig& cfg,
                           const StepObserver& observer) {
  cfg.validate();
  const CompiledDesign compiled(design);
  const int na = compiled.action_count();

  Rng rng(cfg.seed);
  std::vector<double> q(static_cast<std::size_t>(compiled.state_count()) * na,
                        0.0);
  double epsilon = cfg.explorationStart;

  PlaythroughReport report;
  report.seed = cfg.seed;
  detail::Playthrough play(compiled, weights, /*trackResources=*/true);

  auto record = [&] {
    report.statePath.push_back(compiled.state_id(play.state()));
    report.perStepMetrics.push_back(play.metrics());
    report.perStepRewards.push_back(play.reward());
    report.perStepBaseRewards.push_back(play.base_reward());
    if (observer) {
      observer({play.steps_taken(), &compiled, play.state(), play.inventory(),
                &play.metrics()});
    }
  };
  record();

  while (true) {
    if (play.steps_taken() >= static_cast<std::size_t>(cfg.maxEpochs)) {
      report.terminationReason = Termination::MaxEpochs;
      break;
    }
    const std::span<const int> valid = play.valid();
    if (valid.empty()) {
      report.terminationReason = Termination::NoValidActions;
      break;
    }
    const int s = play.state();
    const double* row = &q[static_cast<std::size_t>(s) * na];
    const int a = valid[epsilon_greedy(
        valid.size(), [&](std::size_t i) { return row[valid[i]]; }, epsilon,
        rng)];

    play.step(a);
    report.actionsTaken.push_back(compiled.action_id(a));

    const int next = play.state();
    double best_next = 0.0;
    if (!play.valid().empty()) {
      const double* next_row = &q[static_cast<std::size_t>(next) * na];
      best_next = -std::numeric_limits<double>::infinity();
      for (int b : play.valid()) best_next = std::max(best_next, next_row[b]);
    }
    double& value = q[static_cast<std::size_t>(s) * na + a];
    value += cfg.learningRate *
             (play.reward() + cfg.discount * best_next - value);
    epsilon = std::max(cfg.explorationFloor, epsilon * cfg.explorationDecay);
    record();
  }

  for (int s = 0; s < compiled.state_count(); ++s) {
    report.stateCounts[compiled.state_id(s)] = play.visits()[s];
  }
  for (int a = 0; a < na; ++a) {
    report.actionCounts[compiled.action_id(a)] = play.uses()[a];
  }
  for (int r = 0; r < compiled.resource_count(); ++r) {
    report.resourceTotals[compiled.resource_id(r)] = {
        play.gained()[r], play.lost()[r], play.spent()[r]};
  }

  std::array<double, kMetricCount> sums{};
  for (const auto& m : report.perStepMetrics) {
    const auto values = m.values();
    for (std::size_t i = 0; i < kMetricCount; ++i) sums[i] += values[i];
  }
  const double steps = static_cast<double>(report.perStepMetrics.size());
  for (auto& v : sums) v /= steps;
  report.meanMetrics = MetricVector::from_values(sums);
  for (double r : report.perStepRewards) report.totalReward += r;
  report.playable = static_cast<int>(report.actionsTaken.size()) >=
                    cfg.minPlayableSteps - 1;
  return report;
}

namespace {

json metric_names_json() {
  json names = json::array();
  for (Metric m : kAllMetrics) names.push_back(metric_name(m));
  return names;
}

json metrics_array(const MetricVector& m) {
  json out = json::array();
  for (double v : m.values()) out.push_back(v);
  return out;
}

MetricVector metrics_from_array(const json& doc) {
  if (!doc.is_array() || doc.size() != kMetricCount) {
    throw Error(ErrorCode::SchemaError,
                "SCHEMA_ERROR: metric vectors have exactly ten entries");
  }
  std::array<double, kMetricCount> values{};
  for (std::size_t i = 0; i < kMetricCount; ++i) values[i] = doc[i].get<double>();
  return MetricVector::from_values(values);
}

}  // namespace

json report_to_json(const PlaythroughReport& report) {
  json doc;
  doc["metrics"] = metric_names_json();
  doc["seed"] = report.seed;
  doc["statePath"] = report.statePath;
  doc["actionsTaken"] = report.actionsTaken;
  doc["stateCounts"] = report.stateCounts;
  doc["actionCounts"] = report.actionCounts;
  json totals = json::object();
  for (const auto& [id, t] : report.resourceTotals) {
    totals[id] = {{"gained", t.gained}, {"lost", t.lost}, {"spent", t.spent}};
  }
  doc["resourceTotals"] = std::move(totals);
  json per_step = json::array();
  for (const auto& m : report.perStepMetrics) per_step.push_back(metrics_array(m));
  doc["perStepMetrics"] = std::move(per_step);
  doc["perStepRewards"] = report.perStepRewards;
  doc["perStepBaseRewards"] = report.perStepBaseRewards;
  doc["totalReward"] = report.totalReward;
  doc["meanMetrics"] = metrics_array(report.meanMetrics);
  doc["terminationReason"] = termination_name(report.terminationReason);
  doc["playable"] = report.playable;
  return doc;
}

PlaythroughReport report_from_json(const json& doc) {
  try {
    PlaythroughReport report;
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.statePath = doc.at("statePath").get<std::vector<std::string>>();
    report.actionsTaken = doc.at("actionsTaken").get<std::vector<std::string>>();
    report.stateCounts = doc.at("stateCounts").get<std::map<std::string, int>>();
    report.actionCounts =
        doc.at("actionCounts").get<std::map<std::string, int>>();
    for (const auto& [id, t] : doc.at("resourceTotals").items()) {
      report.resourceTotals[id] = {t.at("gained").get<double>(),
                                   t.at("lost").get<double>(),
                                   t.at("spent").get<double>()};
    }
    for (const auto& m : doc.at("perStepMetrics")) {
      report.perStepMetrics.push_back(metrics_from_array(m));
    }
    report.perStepRewards = doc.at("perStepRewards").get<std::vector<double>>();
    report.perStepBaseRewards =
        doc.at("perStepBaseRewards").get<std::vector<double>>();
    report.totalReward = doc.at("totalReward").get<double>();
    report.meanMetrics = metrics_from_array(doc.at("meanMetrics"));
    const auto reason = doc.at("terminationReason").get<std::string>();
    if (reason == "maxEpochs") {
      report.terminationReason = Termination::MaxEpochs;
    } else if (reason == "noValidActions") {
      report.terminationReason = Termination::NoValidActions;
    } else {
      throw Error(ErrorCode::SchemaError,
                  "SCHEMA_ERROR: unknown terminationReason '" + reason + "'");
    }
    report.playable = doc.at("playable").get<bool>();
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("SCHEMA_ERROR: ") + e.what());
  }
}

namespace {

// Shortest text that reads back as the same double.
std::string number(double value) { return json(value).dump(); }

template <typename Map>
std::pair<std::string, int> most_frequent(const Map& counts) {
  std::pair<std::string, int> best{"", -1};
  for (const auto& [id, count] : counts) {
    if (count > best.second) best = {id, count};
  }
  return best;
}

}  // namespace

std::string render_summary(const PlaythroughReport& report,
                           std::string_view designName) {
  std::ostringstream out;
  out << "Play-through";
  if (!designName.empty()) out << " of '" << designName << "'";
  out << ": " << report.actionsTaken.size() << " action(s), "
      << report.statePath.size() << " arrival(s), ended by "
      << termination_name(report.terminationReason) << "\n";
  out << "Total reward: " << number(report.totalReward) << "\n";

  std::size_t distinct = 0;
  for (const auto& [id, count] : report.stateCounts) distinct += count > 0;
  out << "Distinct states visited: " << distinct << " of "
      << report.stateCounts.size() << "\n";

  const auto top_state = most_frequent(report.stateCounts);
  if (top_state.second > 0) {
    out << "Most visited state: " << top_state.first << " ("
        << top_state.second << " visits)\n";
  }
  const auto top_action = most_frequent(report.actionCounts);
  if (top_action.second > 0) {
    out << "Most used action: " << top_action.first << " ("
        << top_action.second << " uses)\n";
  }

  constexpr std::size_t kPathPreview = 12;
  out << "Path:";
  for (std::size_t i = 0; i < report.statePath.size() && i < kPathPreview; ++i) {
    out << (i == 0 ? " " : " -> ") << report.statePath[i];
  }
  if (report.statePath.size() > kPathPreview) {
    out << " -> ... -> " << report.statePath.back();
  }
  out << "\n";

  for (const auto& [id, t] : report.resourceTotals) {
    out << "Resource " << id << ": gained " << number(t.gained) << ", lost "
        << number(t.lost) << ", spent " << number(t.spent) << "\n";
  }

  out << "Mean metrics:\n";
  for (Metric m : kAllMetrics) {
    out << "  " << metric_name(m) << (is_penalty(m) ? " (penalty)" : "")
        << ": " << number(report.meanMetrics[m]) << "\n";
  }

  out << "Insights:\n";
  if (report.actionsTaken.empty()) {
    out << "  - no valid actions from start: the player can never act\n";
  } else if (report.terminationReason == Termination::NoValidActions) {
    out << "  - the player ran out of valid actions at state "
        << report.statePath.back() << "\n";
  } else {
    out << "  - the game stays open-ended until the epoch limit\n";
  }
  if (!report.playable) out << "  - design is not playable\n";
  if (top_state.second > 0 && report.statePath.size() > 4 &&
      2 * top_state.second > static_cast<int>(report.statePath.size())) {
    out << "  - the player spends most of the game in " << top_state.first
        << "\n";
  }
  return out.str();
}

Evaluation evaluate(const GameDesign& design, const MetricWeights& weights,
                    const SimConfig& cfg) {
  Evaluation result{simulate(design, weights, cfg), {}};
  result.summary = render_summary(result.report, design.name);
  return result;
}

PlaythroughDigest digest_of(const PlaythroughReport& report, std::size_t topN) {
  PlaythroughDigest digest;
  digest.pathLength = report.statePath.size();
  std::vector<std::pair<std::string, int>> counts(report.stateCounts.begin(),
                                                  report.stateCounts.end());
  std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  for (const auto& entry : counts) {
    if (digest.topStates.size() == topN || entry.second == 0) break;
    digest.topStates.push_back(entry);
  }
  digest.meanMetrics = report.meanMetrics;
  digest.totalReward = report.totalReward;
  digest.playable = report.playable;
  return digest;
}

json digest_to_json(const PlaythroughDigest& digest) {
  json top = json::array();
  for (const auto& [id, count] : digest.topStates) {
    top.push_back({{"state", id}, {"visits", count}});
  }
  return {{"pathLength", digest.pathLength},
          {"topStates", std::move(top)},
          {"meanMetrics", metrics_array(digest.meanMetrics)},
          {"totalReward", digest.totalReward},
          {"playable", digest.playable}};
}

GreedyRollout train_finite_horizon_policy(const GameDesign& design,
                                          const MetricWeights& weights,
                                          const PolicyTrainingConfig& cfg) {
  if (cfg.horizon < 1 || cfg.episodes < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "INVALID_CONFIG: horizon and episodes must be positive");
  }
  const CompiledDesign compiled(design);
  const std::size_t na = static_cast<std::size_t>(compiled.action_count());
  std::map<std::vector<int>, std::vector<double>> q;
  auto row = [&](const std::vector<int>& key) -> std::vector<double>& {
    auto [it, inserted] = q.try_emplace(key);
    if (inserted) it->second.assign(na, 0.0);
    return it->second;
  };

  Rng rng(cfg.seed);
  for (int episode = 0; episode < cfg.episodes; ++episode) {
    const double progress =
        cfg.episodes == 1 ? 1.0 : double(episode) / (cfg.episodes - 1);
    const double epsilon =
        cfg.explorationStart + (cfg.explorationEnd - cfg.explorationStart) * progress;
    detail::Playthrough play(compiled, weights);
    std::vector<int> history;
    for (int t = 0; t < cfg.horizon && !play.valid().empty(); ++t) {
      const std::vector<int> valid(play.valid().begin(), play.valid().end());
      const std::vector<double>& current = row(history);
      const int a = valid[epsilon_greedy(
          valid.size(), [&](std::size_t i) { return current[valid[i]]; },
          epsilon, rng)];
      play.step(a);
      std::vector<int> next_history = history;
      next_history.push_back(a);
      double best_next = 0.0;
      if (t + 1 < cfg.horizon && !play.valid().empty()) {
        const std::vector<double>& next = row(next_history);
        best_next = -std::numeric_limits<double>::infinity();
        for (int b : play.valid()) best_next = std::max(best_next, next[b]);
      }
      double& value = row(history)[a];
      value += cfg.learningRate * (play.reward() + best_next - value);
      history = std::move(next_history);
    }
  }

  GreedyRollout rollout;
  detail::Playthrough play(compiled, weights);
  rollout.statePath.push_back(compiled.state_id(play.state()));
  rollout.totalReward = play.reward();
  std::vector<int> history;
  for (int t = 0; t < cfg.horizon && !play.valid().empty(); ++t) {
    const std::vector<double>& current = row(history);
    int best = play.valid().front();
    for (int a : play.valid()) {
      if (current[a] > current[best]) best = a;
    }
    play.step(best);
    history.push_back(best);
    rollout.actions.push_back(compiled.action_id(best));
    rollout.statePath.push_back(compiled.state_id(play.state()));
    rollout.totalReward += play.reward();
  }
  return rollout;
}

}  // namespace gamesys
