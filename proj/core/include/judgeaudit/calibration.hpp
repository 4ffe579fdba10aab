#pragma once

#include <utility>
#include <vector>

#include "judgeaudit/dataset.hpp"
#include "judgeaudit/scoring.hpp"

namespace judgeaudit {

/// The judge's unconditional score distribution p(y), estimated from pooled
/// samples. With smoothing > 0 every mass is strictly positive.
struct LabelMarginal {
  std::vector<int> support;
  std::vector<double> prob;
  bool has_zero_mass = false;  // only possible with smoothing == 0

  double prob_of(int y) const;
};

/// Beta prior fitted to gold scores over the scaled domain
/// [range.min, range.max + 1].
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
  double domain_lo = 0.0;
  double domain_hi = 10.0;
  bool newton_converged = true;  // false: method-of-moments fallback in use
};

/// The Beta prior reduced to integer-support masses q(y) by integrating the
/// density over unit bins.
struct GoldPrior {
  std::vector<int> support;
  std::vector<double> prob;

  double prob_of(int y) const;
};

/// prob(y) = (count(y) + smoothing) / (N + smoothing * |support|).
/// Throws NumericError on an empty pool with smoothing 0.
LabelMarginal estimate_marginal(const std::vector<int>& pooled_scores, const ScoreRange& range,
                                double smoothing);

/// Deterministic pool of rounded samples, interleaved evenly across examples
/// (generation-major order), truncated to pool_target when positive.
std::vector<int> pool_samples(const std::vector<SampleSet>& sample_sets, int pool_target);

/// Method-of-moments estimate for Beta(alpha, beta) from a unit-interval mean
/// and variance: alpha = mean * (mean(1-mean)/var - 1).
std::pair<double, double> beta_moment_estimate(double mean, double variance);

/// Maximum-likelihood Beta fit of gold scores normalized onto [0, 1] by
/// u = (g - range.min) / (range.max + 1 - range.min), u clamped into
/// [1e-6, 1 - 1e-6]. Newton iterations on the digamma system, initialized by
/// the moment estimate; falls back to the moment estimate after 200
/// iterations without convergence. Requires >= 10 values and nonzero
/// variance.
BetaParams fit_beta(const std::vector<double>& gold_rescaled, const ScoreRange& range);

/// q(y) = I_{u(y+1)}(alpha, beta) - I_{u(y)}(alpha, beta); sums to 1.
GoldPrior interval_masses(const BetaParams& params, const ScoreRange& range);

/// Importance-weighted average: y_hat = sum w_i y_i with
/// w_i = (q(y_i)/p(y_i)) / sum_j (q(y_j)/p(y_j)).
/// Throws NumericError when some p(y_i) is zero.
double calibrate_score(const std::vector<int>& samples, const LabelMarginal& p,
                       const GoldPrior& q);

/// calibrate_score over each example's rounded samples; absent final scores
/// propagate for zero-valid examples.
std::vector<FinalScore> calibrate_dataset(const std::vector<SampleSet>& sample_sets,
                                          const LabelMarginal& p, const GoldPrior& q);

}  // namespace judgeaudit
