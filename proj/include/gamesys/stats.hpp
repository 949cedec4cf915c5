#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gamesys {

enum class Direction { Greater, Less };

// '+' or '-'.
char direction_symbol(Direction direction);

// One-sided Wilcoxon signed-rank p-value that the deltas are shifted in the
// given direction. Zeros are dropped and tied magnitudes share midranks.
// The null distribution is exact up to kExactSignedRankLimit nonzero
// deltas and a continuity-corrected normal approximation beyond. All-zero
// input returns 0.5.
inline constexpr std::size_t kExactSignedRankLimit = 200;
double signed_rank_test(std::span<const double> deltas, Direction direction);

struct Descriptive {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  // Population variance.
  double variance = 0.0;

  bool operator==(const Descriptive&) const = default;
};

// All zeros for an empty sample.
Descriptive describe(std::span<const double> values);

double standard_deviation(std::span<const double> values);

// Moment-based sample skewness m3 / m2^1.5; 0 for constant or short input.
double skewness(std::span<const double> values);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<int> counts;

  bool operator==(const Histogram&) const = default;
};

// Equal-width bins spanning [min, max] of the sample; the last bin is
// closed. A constant sample gets the range [v, v + 1]; an empty one gets
// zero edges and zero counts.
Histogram histogram(std::span<const double> values, std::size_t bins);

}  // namespace gamesys
