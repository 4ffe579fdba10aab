#pragma once

#include <optional>
#include <string>
#include <vector>

#include "judgeaudit/dataset.hpp"
#include "judgeaudit/judge.hpp"
#include "judgeaudit/prompt.hpp"
#include "judgeaudit/replay.hpp"
#include "judgeaudit/scoring.hpp"
#include "judgeaudit/stats.hpp"

namespace judgeaudit {

/// Per-example outputs of one generate -> parse -> clip -> average pass.
/// All vectors are aligned with the input examples.
struct EvaluationResult {
  std::vector<SampleSet> sample_sets;
  std::vector<FinalScore> final_scores;
  std::vector<double> gold_rescaled;
  int n_clamped_gold = 0;
};

/// Renders prompts, samples the judge (optionally across `parallelism`
/// threads; output order is by example regardless of completion order),
/// scores every example, and appends transcripts to `cache_writer` when
/// given. Worker exceptions are rethrown after the pool drains.
EvaluationResult run_evaluation(const std::vector<Example>& examples, const PromptTemplate& tmpl,
                                const ScoreRange& range, const SourceSpan& source_span,
                                Judge& judge, const GenerationConfig& cfg, int parallelism,
                                ReplayWriter* cache_writer);

/// Kurtosis / correlation summary of one set of final scores against gold.
/// Absent kurtosis means DEGENERATE, absent r means UNDEFINED; `note`
/// explains any degradation.
struct ScoreStats {
  std::optional<double> kurtosis;
  std::optional<double> r;
  std::optional<double> p;
  std::optional<bool> significant;
  int n_valid = 0;
  std::string note;
};

ScoreStats score_statistics(const std::vector<FinalScore>& scores,
                            const std::vector<double>& gold_rescaled);

/// Dataset-level audit metrics for one evaluation run.
struct EvaluationMetrics {
  ScoreStats model;
  std::optional<double> kurtosis_gold;
  std::optional<int> mode_value;
  std::optional<double> mean_mode_ratio;
  ScoreDistribution model_histogram;
  ScoreDistribution gold_histogram;
  ScoreDistribution raw_sample_histogram;
  int n = 0;
};

EvaluationMetrics compute_metrics(const EvaluationResult& eval, const ScoreRange& range);

}  // namespace judgeaudit
