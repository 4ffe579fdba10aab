#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "judgeaudit/calibration.hpp"
#include "judgeaudit/rng.hpp"
#include "judgeaudit/scoring.hpp"
#include "judgeaudit/special.hpp"
#include "judgeaudit/stats.hpp"
#include "judgeaudit/synthetic_judge.hpp"

namespace {

using namespace judgeaudit;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(rng.next_double());
  return values;
}

void BM_IncompleteBeta(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    if (x > 0.99) x = 0.01;
    benchmark::DoNotOptimize(regularized_incomplete_beta(2.0, 5.0, x));
  }
}
BENCHMARK(BM_IncompleteBeta);

void BM_ExcessKurtosis(benchmark::State& state) {
  const auto values = random_values(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(excess_kurtosis(values));
  }
}
BENCHMARK(BM_ExcessKurtosis)->Arg(1000)->Arg(10000);

void BM_Pearson(benchmark::State& state) {
  const auto xs = random_values(static_cast<std::size_t>(state.range(0)), 2);
  const auto ys = random_values(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(xs, ys));
  }
}
BENCHMARK(BM_Pearson)->Arg(1000)->Arg(10000);

void BM_ParseScore(benchmark::State& state) {
  const std::vector<std::string> texts = {"8", " 7.5\n", "Score: 9", "no digits here", "-0.25"};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_score(texts[i++ % texts.size()]));
  }
}
BENCHMARK(BM_ParseScore);

void BM_SyntheticSampling(benchmark::State& state) {
  SyntheticJudgeParams params;
  params.seed = 9;
  SyntheticJudge judge(params);
  GenerationConfig cfg;
  JudgeRequest request;
  request.example_id = "bench";
  request.gold_rescaled = 4.2;
  request.range = {0, 9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(judge.sample(request, cfg));
  }
}
BENCHMARK(BM_SyntheticSampling);

void BM_FitBeta(benchmark::State& state) {
  SplitMix64 rng(10);
  std::vector<double> gold;
  for (int i = 0; i < 5000; ++i) {
    const double u = rng.next_double();
    gold.push_back(10.0 * u * u);  // skewed toward 0
  }
  const ScoreRange range{0, 9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_beta(gold, range));
  }
}
BENCHMARK(BM_FitBeta);

void BM_CalibrateDataset(benchmark::State& state) {
  const ScoreRange range{0, 9};
  SplitMix64 rng(11);
  std::vector<SampleSet> sets;
  for (int i = 0; i < 1000; ++i) {
    SampleSet set;
    set.example_id = std::to_string(i);
    set.n_raw = 10;
    for (int k = 0; k < 10; ++k) {
      const double v = static_cast<double>(rng.next_int(0, 9));
      set.parsed.push_back(v);
      set.clipped.push_back(v);
    }
    sets.push_back(std::move(set));
  }
  const auto pool = pool_samples(sets, 1000);
  const auto marginal = estimate_marginal(pool, range, 1.0);
  BetaParams params;
  params.alpha = 2.0;
  params.beta = 5.0;
  params.domain_lo = 0.0;
  params.domain_hi = 10.0;
  const auto prior = interval_masses(params, range);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_dataset(sets, marginal, prior));
  }
}
BENCHMARK(BM_CalibrateDataset);

}  // namespace

BENCHMARK_MAIN();
