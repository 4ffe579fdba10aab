#include "judgeaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/special.hpp"

namespace judgeaudit {

namespace {

bool all_equal(std::span<const double> xs) {
  for (double x : xs) {
    if (x != xs.front()) return false;
  }
  return true;
}

}  // namespace

double excess_kurtosis(std::span<const double> xs) {
  const auto n = xs.size();
  if (n < 4) {
    throw DegenerateDistributionError("kurtosis requires at least 4 points, got " +
                                      std::to_string(n));
  }
  if (all_equal(xs)) {
    throw DegenerateDistributionError("kurtosis undefined: fully concentrated (zero variance)");
  }

  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(n);

  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  if (m2 <= 0.0) {
    throw DegenerateDistributionError("kurtosis undefined: fully concentrated (zero variance)");
  }
  return m4 / (m2 * m2) - 3.0;
}

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw NumericError("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                       std::to_string(ys.size()) + ")");
  }
  const auto n = xs.size();
  if (n < 3) {
    throw DegenerateDistributionError("pearson requires at least 3 points, got " +
                                      std::to_string(n));
  }
  if (all_equal(xs) || all_equal(ys)) {
    throw DegenerateDistributionError("pearson undefined: zero variance in an input vector");
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw DegenerateDistributionError("pearson undefined: zero variance in an input vector");
  }

  // Single sqrt of the product keeps r exactly +-1 on perfectly linear data.
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);

  CorrelationResult result;
  result.r = r;
  result.n = static_cast<int>(n);
  const double dof = static_cast<double>(n - 2);
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double t = r * std::sqrt(dof / denom);
    result.p_value = student_t_two_tailed_p(t, dof);
  }
  return result;
}

ScoreDistribution histogram(std::span<const double> final_scores, const ScoreRange& range) {
  ScoreDistribution dist;
  dist.support.reserve(range.support_size());
  for (int y = range.min; y <= range.max; ++y) dist.support.push_back(y);
  dist.counts.assign(range.support_size(), 0);

  for (double score : final_scores) {
    const auto y = static_cast<int>(std::lround(score));
    if (y < range.min || y > range.max) {
      throw NumericError("histogram: score " + std::to_string(score) + " outside range [" +
                         std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
    }
    ++dist.counts[static_cast<std::size_t>(y - range.min)];
    ++dist.n;
  }
  return dist;
}

bool significance_star(double p) { return p < 0.01; }

}  // namespace judgeaudit
