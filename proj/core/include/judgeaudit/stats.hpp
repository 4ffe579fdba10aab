#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "judgeaudit/dataset.hpp"

namespace judgeaudit {

/// Histogram of rounded scores over the integer support range.min..range.max.
struct ScoreDistribution {
  std::vector<int> support;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
};

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  int n = 0;
};

/// Population (moment) estimator m4/m2^2 - 3. Requires >= 4 points and
/// nonzero variance; throws DegenerateDistributionError otherwise.
double excess_kurtosis(std::span<const double> xs);

/// Product-moment r with a two-tailed p from the exact t reduction
/// t = r * sqrt((n-2)/(1-r^2)). Requires equal lengths >= 3 and nonzero
/// variance on both sides.
CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys);

ScoreDistribution histogram(std::span<const double> final_scores, const ScoreRange& range);

/// True iff p < 0.01 (strict).
bool significance_star(double p);

}  // namespace judgeaudit
