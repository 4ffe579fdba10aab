#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "judgeaudit/calibration.hpp"
#include "judgeaudit/errors.hpp"

#include "test_utils.hpp"

using namespace judgeaudit;

namespace {

LabelMarginal make_marginal(const ScoreRange& range, const std::vector<double>& probs) {
  LabelMarginal marginal;
  for (int y = range.min; y <= range.max; ++y) marginal.support.push_back(y);
  marginal.prob = probs;
  return marginal;
}

GoldPrior make_prior(const ScoreRange& range, const std::vector<double>& probs) {
  GoldPrior prior;
  for (int y = range.min; y <= range.max; ++y) prior.support.push_back(y);
  prior.prob = probs;
  return prior;
}

}  // namespace

TEST_CASE("estimate_marginal without smoothing reproduces raw frequencies") {
  const ScoreRange range{0, 9};
  std::vector<int> pool(900, 8);
  pool.insert(pool.end(), 100, 9);

  const auto marginal = estimate_marginal(pool, range, 0.0);
  CHECK(marginal.prob[8] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(marginal.prob[9] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(marginal.prob[0] == 0.0);
  CHECK(marginal.has_zero_mass);
}

TEST_CASE("estimate_marginal applies add-one smoothing") {
  const ScoreRange range{0, 9};
  std::vector<int> pool(900, 8);
  pool.insert(pool.end(), 100, 9);

  const auto marginal = estimate_marginal(pool, range, 1.0);
  CHECK(marginal.prob[0] == doctest::Approx(1.0 / 1010.0).epsilon(1e-12));
  CHECK(marginal.prob[8] == doctest::Approx(901.0 / 1010.0).epsilon(1e-12));
  CHECK_FALSE(marginal.has_zero_mass);

  double total = 0.0;
  for (double p : marginal.prob) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimate_marginal on an empty pool") {
  const ScoreRange range{0, 9};
  const auto uniform = estimate_marginal({}, range, 1.0);
  for (double p : uniform.prob) CHECK(p == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_marginal({}, range, 0.0), NumericError);
}

TEST_CASE("pool_samples strides evenly and respects the target") {
  std::vector<SampleSet> sets;
  for (int i = 0; i < 100; ++i) {
    SampleSet set;
    set.example_id = std::to_string(i);
    set.n_raw = 10;
    for (int k = 0; k < 10; ++k) {
      set.parsed.push_back(i % 10);
      set.clipped.push_back(i % 10);
    }
    sets.push_back(set);
  }
  const auto all = pool_samples(sets, 0);
  CHECK(all.size() == 1000);
  const auto pooled = pool_samples(sets, 300);
  CHECK(pooled.size() == 300);
  // Strided selection touches early, middle, and late examples.
  CHECK(pooled.front() == 0);
  CHECK(pooled.back() == 9);
}

TEST_CASE("beta moment estimate matches the closed form") {
  const auto [alpha, beta] = beta_moment_estimate(0.3, 0.01);
  CHECK(alpha == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(beta == doctest::Approx(14.0).epsilon(1e-12));
}

TEST_CASE("beta MLE recovers Beta(2,5) and agrees with the grid-search oracle") {
  SplitMix64 rng(20240902);
  const ScoreRange range{0, 9};
  std::vector<double> gold;
  std::vector<double> us;
  for (int i = 0; i < 5000; ++i) {
    const double u = testutil::beta_draw(rng, 2.0, 5.0);
    gold.push_back(10.0 * u);  // domain [0, 10]
    us.push_back(std::clamp(u, 1e-6, 1.0 - 1e-6));
  }

  const auto params = fit_beta(gold, range);
  CHECK(params.newton_converged);
  CHECK(params.alpha > 1.8);
  CHECK(params.alpha < 2.2);
  CHECK(params.beta > 4.5);
  CHECK(params.beta < 5.5);
  CHECK(params.domain_lo == 0.0);
  CHECK(params.domain_hi == 10.0);

  const auto [grid_alpha, grid_beta] = testutil::oracle_beta_mle_grid(us);
  CHECK(std::fabs(params.alpha - grid_alpha) < 0.05);
  CHECK(std::fabs(params.beta - grid_beta) < 0.05);
}

TEST_CASE("beta MLE on a mirror-image sample set is symmetric") {
  SplitMix64 rng(11);
  const ScoreRange range{0, 9};
  std::vector<double> gold;
  for (int i = 0; i < 1000; ++i) {
    const double u = testutil::beta_draw(rng, 2.0, 6.0);
    gold.push_back(10.0 * u);
    gold.push_back(10.0 * (1.0 - u));
  }
  const auto params = fit_beta(gold, range);
  CHECK(std::fabs(params.alpha - params.beta) < 0.1);
}

TEST_CASE("beta MLE error paths") {
  const ScoreRange range{0, 9};
  CHECK_THROWS_AS(fit_beta(std::vector<double>{1, 2, 3}, range), DegenerateDistributionError);
  CHECK_THROWS_AS(fit_beta(std::vector<double>(50, 4.0), range), DegenerateDistributionError);
}

TEST_CASE("interval masses of the uniform prior are equal-width bins") {
  const ScoreRange range{0, 9};
  BetaParams params;
  params.alpha = 1.0;
  params.beta = 1.0;
  params.domain_lo = 0.0;
  params.domain_hi = 10.0;
  const auto prior = interval_masses(params, range);
  for (double q : prior.prob) CHECK(q == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("interval masses sum to one and match quadrature") {
  const ScoreRange range{0, 9};
  BetaParams params;
  params.alpha = 2.0;
  params.beta = 5.0;
  params.domain_lo = 0.0;
  params.domain_hi = 10.0;

  const auto prior = interval_masses(params, range);
  double total = 0.0;
  for (double q : prior.prob) total += q;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  for (int y = 0; y <= 9; ++y) {
    const double expected = testutil::oracle_beta_mass(2.0, 5.0, y / 10.0, (y + 1) / 10.0);
    CHECK(prior.prob[y] == doctest::Approx(expected).epsilon(1e-8));
  }

  // Sum-to-one holds for spiky parameters too.
  for (const auto& ab : {std::pair{0.5, 0.5}, std::pair{9.0, 2.0}, std::pair{14.0, 14.0}}) {
    BetaParams p;
    p.alpha = ab.first;
    p.beta = ab.second;
    p.domain_lo = 0.0;
    p.domain_hi = 10.0;
    const auto masses = interval_masses(p, range);
    double sum = 0.0;
    for (double q : masses.prob) sum += q;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("calibrate_score reproduces the hand-worked weighted average") {
  const ScoreRange range{0, 9};
  std::vector<double> p_table(10, 0.0);
  p_table[8] = 0.7;
  p_table[9] = 0.1;
  std::vector<double> q_table(10, 0.0);
  q_table[8] = 0.2;
  q_table[9] = 0.3;

  const auto p = make_marginal(range, p_table);
  const auto q = make_prior(range, q_table);
  const double calibrated = calibrate_score({8, 8, 9}, p, q);
  CHECK(calibrated == doctest::Approx(8.84).epsilon(1e-6));
}

TEST_CASE("calibrate_score equals the plain mean when q == p") {
  const ScoreRange range{0, 9};
  SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    // Random positive table, shared by p and q.
    std::vector<double> table;
    double total = 0.0;
    for (int y = 0; y <= 9; ++y) {
      table.push_back(0.05 + rng.next_double());
      total += table.back();
    }
    for (double& v : table) v /= total;
    const auto p = make_marginal(range, table);
    const auto q = make_prior(range, table);

    const int n = 1 + static_cast<int>(rng.next_int(0, 9));
    std::vector<int> samples;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      samples.push_back(static_cast<int>(rng.next_int(0, 9)));
      sum += samples.back();
    }
    CHECK(calibrate_score(samples, p, q) == sum / n);
  }
}

TEST_CASE("calibrate_score fixed points and errors") {
  const ScoreRange range{0, 9};
  std::vector<double> p_table(10, 0.1);
  std::vector<double> q_table(10, 0.0);
  for (int y = 0; y <= 9; ++y) q_table[y] = (y + 1) / 55.0;
  const auto p = make_marginal(range, p_table);
  const auto q = make_prior(range, q_table);

  CHECK(calibrate_score({4, 4, 4, 4}, p, q) == 4.0);

  std::vector<double> p_zero(10, 0.1);
  p_zero[3] = 0.0;
  const auto p_with_zero = make_marginal(range, p_zero);
  CHECK_THROWS_AS(calibrate_score({3, 4}, p_with_zero, q), NumericError);
  CHECK_THROWS_AS(calibrate_score({}, p, q), NumericError);
}

TEST_CASE("calibrate_score is permutation invariant and stays within the sample hull") {
  const ScoreRange range{0, 9};
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p_table;
    std::vector<double> q_table;
    double pt = 0.0, qt = 0.0;
    for (int y = 0; y <= 9; ++y) {
      p_table.push_back(0.02 + rng.next_double());
      q_table.push_back(0.02 + rng.next_double());
      pt += p_table.back();
      qt += q_table.back();
    }
    for (double& v : p_table) v /= pt;
    for (double& v : q_table) v /= qt;
    const auto p = make_marginal(range, p_table);
    const auto q = make_prior(range, q_table);

    std::vector<int> samples;
    const int n = 2 + static_cast<int>(rng.next_int(0, 8));
    for (int i = 0; i < n; ++i) samples.push_back(static_cast<int>(rng.next_int(0, 9)));

    const double forward = calibrate_score(samples, p, q);
    auto reversed = samples;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(forward == doctest::Approx(calibrate_score(reversed, p, q)).epsilon(1e-12));

    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    CHECK(forward >= *lo - 1e-12);
    CHECK(forward <= *hi + 1e-12);
  }
}

TEST_CASE("calibrate_dataset propagates absent scores and matches aggregate when q == p") {
  const ScoreRange range{0, 9};
  std::vector<double> table(10, 0.1);
  const auto p = make_marginal(range, table);
  const auto q = make_prior(range, table);

  std::vector<SampleSet> sets;
  SplitMix64 rng(4);
  for (int i = 0; i < 50; ++i) {
    SampleSet set;
    set.example_id = std::to_string(i);
    set.n_raw = 10;
    const int n = static_cast<int>(rng.next_int(0, 10));
    for (int k = 0; k < n; ++k) {
      const double v = static_cast<double>(rng.next_int(0, 9));
      set.parsed.push_back(v);
      set.clipped.push_back(v);
    }
    sets.push_back(set);
  }

  const auto calibrated = calibrate_dataset(sets, p, q);
  REQUIRE(calibrated.size() == sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto plain = aggregate(sets[i]);
    CHECK(calibrated[i].n_valid == plain.n_valid);
    CHECK(calibrated[i].value.has_value() == plain.value.has_value());
    if (plain.value.has_value()) {
      CHECK(*calibrated[i].value == *plain.value);  // exact equality
    }
  }
}
