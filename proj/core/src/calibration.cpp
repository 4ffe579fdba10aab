#include "judgeaudit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/special.hpp"

namespace judgeaudit {

namespace {

constexpr double kEdgeEpsilon = 1e-6;  // keeps log-likelihood finite at bin edges
constexpr int kNewtonMaxIterations = 200;
constexpr double kNewtonTolerance = 1e-10;

double support_prob(const std::vector<int>& support, const std::vector<double>& prob, int y,
                    const char* what) {
  if (support.empty() || y < support.front() || y > support.back()) {
    throw NumericError(std::string(what) + ": score " + std::to_string(y) +
                       " outside the support");
  }
  return prob[static_cast<std::size_t>(y - support.front())];
}

}  // namespace

double LabelMarginal::prob_of(int y) const { return support_prob(support, prob, y, "p(y)"); }

double GoldPrior::prob_of(int y) const { return support_prob(support, prob, y, "q(y)"); }

LabelMarginal estimate_marginal(const std::vector<int>& pooled_scores, const ScoreRange& range,
                                double smoothing) {
  if (smoothing < 0.0) {
    throw NumericError("marginal smoothing must be >= 0");
  }
  if (pooled_scores.empty() && smoothing == 0.0) {
    throw NumericError("cannot estimate a label marginal from an empty pool without smoothing");
  }

  LabelMarginal marginal;
  marginal.support.reserve(range.support_size());
  for (int y = range.min; y <= range.max; ++y) marginal.support.push_back(y);

  std::vector<long> counts(range.support_size(), 0);
  for (int y : pooled_scores) {
    if (y < range.min || y > range.max) {
      throw NumericError("pooled score " + std::to_string(y) + " outside the support");
    }
    ++counts[static_cast<std::size_t>(y - range.min)];
  }

  const double denom =
      static_cast<double>(pooled_scores.size()) + smoothing * range.support_size();
  marginal.prob.reserve(counts.size());
  for (long count : counts) {
    const double p = (static_cast<double>(count) + smoothing) / denom;
    if (p == 0.0) marginal.has_zero_mass = true;
    marginal.prob.push_back(p);
  }
  return marginal;
}

std::vector<int> pool_samples(const std::vector<SampleSet>& sample_sets, int pool_target) {
  std::vector<int> all;
  for (const auto& set : sample_sets) {
    for (int y : rounded_samples(set)) all.push_back(y);
  }
  if (pool_target <= 0 || static_cast<std::size_t>(pool_target) >= all.size()) {
    return all;
  }
  // Evenly strided picks keep the pool spread across prompts and deterministic.
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(pool_target));
  const std::size_t total = all.size();
  for (int k = 0; k < pool_target; ++k) {
    pool.push_back(all[static_cast<std::size_t>(k) * total / pool_target]);
  }
  return pool;
}

std::pair<double, double> beta_moment_estimate(double mean, double variance) {
  if (!(mean > 0.0) || !(mean < 1.0) || !(variance > 0.0)) {
    throw NumericError("beta moment estimate requires mean in (0,1) and variance > 0");
  }
  const double common = mean * (1.0 - mean) / variance - 1.0;
  if (!(common > 0.0)) {
    throw NumericError("beta moment estimate undefined: variance too large for the mean");
  }
  return {mean * common, (1.0 - mean) * common};
}

BetaParams fit_beta(const std::vector<double>& gold_rescaled, const ScoreRange& range) {
  if (gold_rescaled.size() < 10) {
    throw DegenerateDistributionError("beta fit requires at least 10 gold values, got " +
                                      std::to_string(gold_rescaled.size()));
  }

  const double width = static_cast<double>(range.max) + 1.0 - range.min;
  const auto n = static_cast<double>(gold_rescaled.size());

  double mean = 0.0;
  double sum_log_u = 0.0;
  double sum_log_1mu = 0.0;
  double m2 = 0.0;
  // Two passes: moments first, then the log sufficient statistics.
  std::vector<double> us;
  us.reserve(gold_rescaled.size());
  for (double g : gold_rescaled) {
    double u = (g - range.min) / width;
    u = std::clamp(u, kEdgeEpsilon, 1.0 - kEdgeEpsilon);
    us.push_back(u);
    mean += u;
  }
  mean /= n;
  for (double u : us) {
    const double d = u - mean;
    m2 += d * d;
    sum_log_u += std::log(u);
    sum_log_1mu += std::log1p(-u);
  }
  bool varied = false;
  for (double u : us) {
    if (u != us.front()) {
      varied = true;
      break;
    }
  }
  const double variance = m2 / n;
  if (!varied || variance <= 0.0) {
    throw DegenerateDistributionError("beta fit undefined: zero-variance gold scores");
  }

  const auto [alpha0, beta0] = beta_moment_estimate(mean, variance);
  const double s1 = sum_log_u / n;    // E[log u]
  const double s2 = sum_log_1mu / n;  // E[log(1-u)]

  // Newton on grad L = 0:
  //   psi(a) - psi(a+b) = s1
  //   psi(b) - psi(a+b) = s2
  double a = alpha0;
  double b = beta0;
  bool converged = false;
  for (int iter = 0; iter < kNewtonMaxIterations; ++iter) {
    const double psi_ab = digamma(a + b);
    const double g1 = digamma(a) - psi_ab - s1;
    const double g2 = digamma(b) - psi_ab - s2;
    if (std::fabs(g1) < kNewtonTolerance && std::fabs(g2) < kNewtonTolerance) {
      converged = true;
      break;
    }

    const double tri_ab = trigamma(a + b);
    const double j11 = trigamma(a) - tri_ab;
    const double j22 = trigamma(b) - tri_ab;
    const double j12 = -tri_ab;
    const double det = j11 * j22 - j12 * j12;
    if (det == 0.0 || !std::isfinite(det)) break;

    const double da = (g1 * j22 - g2 * j12) / det;
    const double db = (g2 * j11 - g1 * j12) / det;
    // Damp the step so (a, b) stays in the positive quadrant.
    double step = 1.0;
    while (a - step * da <= 0.0 || b - step * db <= 0.0) {
      step *= 0.5;
      if (step < 1e-12) break;
    }
    a -= step * da;
    b -= step * db;
  }

  BetaParams params;
  params.domain_lo = range.min;
  params.domain_hi = static_cast<double>(range.max) + 1.0;
  params.newton_converged = converged;
  if (converged && std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0) {
    params.alpha = a;
    params.beta = b;
  } else {
    params.alpha = alpha0;
    params.beta = beta0;
    params.newton_converged = false;
  }
  return params;
}

GoldPrior interval_masses(const BetaParams& params, const ScoreRange& range) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw NumericError("interval masses require positive beta parameters");
  }
  const double width = static_cast<double>(range.max) + 1.0 - range.min;

  GoldPrior prior;
  prior.support.reserve(range.support_size());
  prior.prob.reserve(range.support_size());
  double lower = 0.0;  // I at u(range.min) == 0
  for (int y = range.min; y <= range.max; ++y) {
    const double u_hi = (static_cast<double>(y) + 1.0 - range.min) / width;
    const double upper =
        y == range.max ? 1.0 : regularized_incomplete_beta(params.alpha, params.beta, u_hi);
    prior.support.push_back(y);
    prior.prob.push_back(upper - lower);
    lower = upper;
  }
  return prior;
}

double calibrate_score(const std::vector<int>& samples, const LabelMarginal& p,
                       const GoldPrior& q) {
  if (samples.empty()) {
    throw NumericError("calibrate_score requires at least one sample");
  }

  double weighted_sum = 0.0;
  double weight_total = 0.0;
  for (int y : samples) {
    const double py = p.prob_of(y);
    if (py <= 0.0) {
      throw NumericError("p(" + std::to_string(y) +
                         ") is zero; enable marginal smoothing to calibrate");
    }
    const double ratio = q.prob_of(y) / py;
    weighted_sum += ratio * static_cast<double>(y);
    weight_total += ratio;
  }
  if (!(weight_total > 0.0)) {
    throw NumericError("calibration weights sum to zero");
  }
  return weighted_sum / weight_total;
}

std::vector<FinalScore> calibrate_dataset(const std::vector<SampleSet>& sample_sets,
                                          const LabelMarginal& p, const GoldPrior& q) {
  std::vector<FinalScore> scores;
  scores.reserve(sample_sets.size());
  for (const auto& set : sample_sets) {
    FinalScore score;
    score.example_id = set.example_id;
    score.n_valid = static_cast<int>(set.clipped.size());
    if (score.n_valid > 0) {
      score.value = calibrate_score(rounded_samples(set), p, q);
    }
    scores.push_back(std::move(score));
  }
  return scores;
}

}  // namespace judgeaudit
