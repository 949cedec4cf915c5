#include "gamesys/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gamesys {

char direction_symbol(Direction direction) {
  return direction == Direction::Greater ? '+' : '-';
}

namespace {

// Doubled midranks of |x| so ties stay integral.
std::vector<long> doubled_ranks(const std::vector<double>& magnitudes) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return magnitudes[a] < magnitudes[b];
  });
  std::vector<long> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    const long doubled = static_cast<long>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    i = j + 1;
  }
  return ranks;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double signed_rank_test(std::span<const double> deltas, Direction direction) {
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (double d : deltas) {
    if (d == 0.0) continue;
    magnitudes.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t n = magnitudes.size();
  if (n == 0) return 0.5;
  const std::vector<long> ranks = doubled_ranks(magnitudes);
  long observed = 0;
  long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (positive[i]) observed += ranks[i];
  }
  // The Less tail of W+ is the Greater tail of W- = total - W+.
  if (direction == Direction::Less) observed = total - observed;

  if (n <= kExactSignedRankLimit) {
    std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
    dist[0] = 1.0;
    long reach = 0;
    for (long r : ranks) {
      for (long w = reach; w >= 0; --w) {
        const double p = dist[w];
        dist[w] = 0.5 * p;
        dist[w + r] += 0.5 * p;
      }
      reach += r;
    }
    double p = 0.0;
    for (long w = observed; w <= total; ++w) p += dist[w];
    return std::min(1.0, p);
  }

  // Work in doubled units: mean total/2, variance sum(r^2)/4.
  double sum_sq = 0.0;
  for (long r : ranks) sum_sq += double(r) * double(r);
  const double mean = total / 2.0;
  const double sd = std::sqrt(sum_sq / 4.0);
  const double z = (observed - 1.0 - mean) / sd;  // continuity: half a rank
  return normal_upper_tail(z);
}

Descriptive describe(std::span<const double> values) {
  Descriptive d;
  if (values.empty()) return d;
  d.min = *std::min_element(values.begin(), values.end());
  d.max = *std::max_element(values.begin(), values.end());
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - d.mean) * (v - d.mean);
  d.variance = ss / values.size();
  return d;
}

double standard_deviation(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

double skewness(std::span<const double> values) {
  if (values.size() < 3) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= values.size();
  m3 /= values.size();
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  Histogram h;
  h.edges.assign(bins + 1, 0.0);
  h.counts.assign(bins, 0);
  if (values.empty() || bins == 0) return h;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * i;
  h.edges[bins] = hi;
  for (double v : values) {
    auto bin = static_cast<std::size_t>((v - lo) / width);
    if (bin >= bins) bin = bins - 1;
    // Guard against rounding at interior edges.
    while (bin > 0 && v < h.edges[bin]) --bin;
    while (bin + 1 < bins && v >= h.edges[bin + 1]) ++bin;
    ++h.counts[bin];
  }
  return h;
}

}  // namespace gamesys
