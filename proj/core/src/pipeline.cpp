#include "judgeaudit/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

EvaluationResult run_evaluation(const std::vector<Example>& examples, const PromptTemplate& tmpl,
                                const ScoreRange& range, const SourceSpan& source_span,
                                Judge& judge, const GenerationConfig& cfg, int parallelism,
                                ReplayWriter* cache_writer) {
  EvaluationResult result;

  std::vector<double> gold;
  gold.reserve(examples.size());
  for (const auto& ex : examples) gold.push_back(ex.gold);
  auto rescaled = rescale_gold(gold, source_span.lo, source_span.hi, range);
  result.gold_rescaled = std::move(rescaled.values);
  result.n_clamped_gold = rescaled.clamped;

  std::vector<RawGeneration> generations(examples.size());
  const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(examples.size())));

  std::atomic<std::size_t> next_index{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next_index.fetch_add(1);
      if (i >= examples.size()) return;
      try {
        JudgeRequest request;
        request.example_id = examples[i].id;
        request.prompt = render_prompt(tmpl, examples[i], range);
        request.gold_rescaled = result.gold_rescaled[i];
        request.range = range;
        generations[i] = judge.sample(request, cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (cache_writer != nullptr) {
    const std::string fingerprint = config_fingerprint(cfg);
    for (const auto& gen : generations) cache_writer->append(gen, fingerprint);
  }

  result.sample_sets.reserve(examples.size());
  result.final_scores.reserve(examples.size());
  for (const auto& gen : generations) {
    result.sample_sets.push_back(build_sample_set(gen, range));
    result.final_scores.push_back(aggregate(result.sample_sets.back()));
  }
  return result;
}

ScoreStats score_statistics(const std::vector<FinalScore>& scores,
                            const std::vector<double>& gold_rescaled) {
  ScoreStats stats;

  std::vector<double> model_values;
  std::vector<double> gold_values;
  model_values.reserve(scores.size());
  gold_values.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].value.has_value()) {
      model_values.push_back(*scores[i].value);
      gold_values.push_back(gold_rescaled[i]);
    }
  }
  stats.n_valid = static_cast<int>(model_values.size());

  try {
    stats.kurtosis = excess_kurtosis(model_values);
  } catch (const DegenerateDistributionError& err) {
    stats.note = err.what();
  }
  try {
    const auto corr = pearson(gold_values, model_values);
    stats.r = corr.r;
    stats.p = corr.p_value;
    stats.significant = significance_star(corr.p_value);
  } catch (const DegenerateDistributionError& err) {
    if (!stats.note.empty()) stats.note += "; ";
    stats.note += "correlation undefined: ";
    stats.note += err.what();
  }
  return stats;
}

EvaluationMetrics compute_metrics(const EvaluationResult& eval, const ScoreRange& range) {
  EvaluationMetrics metrics;
  metrics.n = static_cast<int>(eval.sample_sets.size());
  metrics.model = score_statistics(eval.final_scores, eval.gold_rescaled);

  try {
    metrics.kurtosis_gold = excess_kurtosis(eval.gold_rescaled);
  } catch (const DegenerateDistributionError&) {
    // reported as absent
  }

  std::vector<double> model_values;
  for (const auto& score : eval.final_scores) {
    if (score.value.has_value()) model_values.push_back(*score.value);
  }
  metrics.model_histogram = histogram(model_values, range);
  metrics.gold_histogram = histogram(eval.gold_rescaled, range);

  std::vector<double> raw_pool;
  for (const auto& set : eval.sample_sets) {
    raw_pool.insert(raw_pool.end(), set.clipped.begin(), set.clipped.end());
  }
  metrics.raw_sample_histogram = histogram(raw_pool, range);

  try {
    const int mode = dataset_mode(eval.sample_sets, range);
    metrics.mode_value = mode;
    double ratio_sum = 0.0;
    int ratio_count = 0;
    for (const auto& set : eval.sample_sets) {
      if (const auto ratio = mode_ratio(set, mode)) {
        ratio_sum += *ratio;
        ++ratio_count;
      }
    }
    if (ratio_count > 0) metrics.mean_mode_ratio = ratio_sum / ratio_count;
  } catch (const DegenerateDistributionError&) {
    // no valid samples anywhere; mode stays absent
  }
  return metrics;
}

}  // namespace judgeaudit
