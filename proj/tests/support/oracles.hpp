#pragma once

// Independent reference implementations used to cross-check the library.
// They share no code with src/ beyond the design types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gamesys/design.hpp"

namespace gamesys::testing {

// Pearson chi-square statistic of observed counts against a uniform
// expectation.
inline double chi_square_uniform(const std::vector<int>& counts) {
  double total = 0.0;
  for (int c : counts) total += c;
  const double expected = total / counts.size();
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// Chi-square critical value at the given degrees of freedom using the
// Wilson-Hilferty approximation, z standard deviations out.
inline double chi_square_critical(int dof, double z = 3.0) {
  const double k = dof;
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

// Exhaustive one-sided signed-rank p-value: enumerates every sign pattern
// of the nonzero absolute deltas and counts those whose positive-rank sum
// is at least (direction +) or at most (direction -) the observed one.
inline double signed_rank_by_enumeration(std::vector<double> deltas,
                                         bool positive) {
  deltas.erase(std::remove(deltas.begin(), deltas.end(), 0.0), deltas.end());
  const std::size_t n = deltas.size();
  if (n == 0) return 0.5;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(deltas[a]) < std::fabs(deltas[b]);
  });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::fabs(deltas[order[j + 1]]) == std::fabs(deltas[order[i]])) {
      ++j;
    }
    const double mid = (i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (deltas[i] > 0) observed += rank[i];
  }
  std::size_t hits = 0;
  const std::size_t patterns = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) w += rank[i];
    }
    if (positive ? w >= observed - 1e-9 : w <= observed + 1e-9) ++hits;
  }
  return double(hits) / double(patterns);
}

// Brute-force optimum of the unit-weight reward over every action sequence
// of up to `horizon` steps in a resource-free design. Sequences end early
// only when no action is available. The initial arrival is included.
class HorizonOracle {
 public:
  explicit HorizonOracle(const GameDesign& design) : design_(design) {
    for (const auto& s : design.states) importance_[s.id] = s.importance;
    for (const auto& t : design.transitions) {
      next_[t.from][t.action] = t.to;
    }
  }

  double best_total(int horizon) const {
    Path path;
    path.states.push_back(design_.startState);
    const double first = arrival_reward(path, "");
    path.rewards.push_back(first);
    return first + search(path, horizon);
  }

  // Reward of a concrete action sequence; used to score greedy rollouts.
  double total_of(const std::vector<std::string>& actions) const {
    Path path;
    path.states.push_back(design_.startState);
    double total = arrival_reward(path, "");
    path.rewards.push_back(total);
    for (const auto& a : actions) {
      path.states.push_back(next_.at(path.states.back()).at(a));
      const double r = arrival_reward(path, a);
      path.actions.push_back(a);
      path.rewards.push_back(r);
      total += r;
    }
    return total;
  }

 private:
  struct Path {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<double> rewards;
  };

  double search(Path& path, int remaining) const {
    if (remaining == 0) return 0.0;
    const auto it = next_.find(path.states.back());
    if (it == next_.end() || it->second.empty()) return 0.0;
    double best = -1e300;
    for (const auto& [action, to] : it->second) {
      path.states.push_back(to);
      const double r = arrival_reward(path, action);
      path.actions.push_back(action);
      path.rewards.push_back(r);
      best = std::max(best, r + search(path, remaining - 1));
      path.rewards.pop_back();
      path.actions.pop_back();
      path.states.pop_back();
    }
    return best;
  }

  // path.states already ends with the arrival state; path.actions and
  // path.rewards still describe only the earlier steps.
  double arrival_reward(const Path& path, const std::string& action) const {
    const std::string& here = path.states.back();
    const auto prior_visits =
        std::count(path.states.begin(), path.states.end() - 1, here);
    double reward = importance_.at(here);
    reward -= prior_visits;
    reward += prior_visits == 0 ? 1 : 0;
    if (!action.empty()) {
      const auto prior_uses =
          std::count(path.actions.begin(), path.actions.end(), action);
      reward -= prior_uses;
      reward += prior_uses == 0 ? 1 : 0;
    }
    const std::size_t n = path.rewards.size();
    double consistency = 0.0;
    for (std::size_t i = n - n / 2; i < n; ++i) consistency += path.rewards[i];
    reward -= consistency;
    std::set<std::string> unvisited;
    const auto it = next_.find(here);
    if (it != next_.end()) {
      reward += it->second.size();
      for (const auto& [a, to] : it->second) {
        if (to == here) continue;
        if (std::find(path.states.begin(), path.states.end() - 1, to) ==
            path.states.end() - 1) {
          unvisited.insert(to);
        }
      }
    }
    reward += unvisited.size();
    return reward;
  }

  const GameDesign& design_;
  std::map<std::string, double> importance_;
  std::map<std::string, std::map<std::string, std::string>> next_;
};

}  // namespace gamesys::testing
