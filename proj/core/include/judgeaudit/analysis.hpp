#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "judgeaudit/dataset.hpp"
#include "judgeaudit/judge.hpp"
#include "judgeaudit/prompt.hpp"
#include "judgeaudit/scoring.hpp"

namespace judgeaudit {

enum class SweepAxis { kTemperature, kRange };

struct SweepSpec {
  SweepAxis axis = SweepAxis::kTemperature;
  std::vector<double> temperatures = {0.4, 0.7, 1.0, 1.3};
  std::vector<ScoreRange> ranges = {{1, 5}, {0, 9}, {1, 100}};
  double fixed_temperature = 0.7;
  ScoreRange fixed_range = {0, 9};
};

struct SweepSetting {
  std::string label;
  ScoreRange range;
  double temperature = 0.7;
};

struct SweepEntry {
  SweepSetting setting;
  std::optional<double> kurtosis;  // absent: DEGENERATE
  std::optional<double> r;         // absent: UNDEFINED
  double p = 1.0;
  int n_valid = 0;
  std::string error;  // non-empty when this setting failed outright
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  /// Index into entries of the maximal defined r; ties break toward the
  /// earlier-listed setting. Absent when no setting has a defined r.
  std::optional<std::size_t> best_setting_by_r;
};

/// Builds a backend for one sweep setting (score range and temperature).
using JudgeFactory = std::function<std::unique_ptr<Judge>(const SweepSetting&)>;

/// Runs the full generate -> score -> metrics pipeline once per setting.
/// Gold scores are re-rescaled from their source span for every range
/// setting. Per-setting failures are recorded in the entry, not thrown.
SweepResult run_sweep(const std::vector<Example>& examples, const PromptTemplate& tmpl,
                      const SourceSpan& source_span, const GenerationConfig& base_cfg,
                      const SweepSpec& spec, const JudgeFactory& make_judge, int parallelism);

/// The settings a spec expands to, in sweep order.
std::vector<SweepSetting> expand_sweep_settings(const SweepSpec& spec);

// ---- Input features ----

struct FeatureVector {
  int source_length = 0;       // whitespace-token count of the source text
  double word_overlap = 0.0;   // Jaccard over lowercased whitespace tokens
  std::optional<double> source_ppl;
  std::optional<double> target_ppl;
  std::optional<double> overall_ppl;
};

/// Jaccard ratio over lowercased whitespace tokens. Both empty -> 1 (texts
/// are identical); exactly one empty -> 0.
double word_overlap(std::string_view a, std::string_view b);

/// Pluggable per-token log-probability source for the perplexity features.
class LogProbScorer {
 public:
  virtual ~LogProbScorer() = default;
  /// Natural-log probabilities per token; nullopt on failure.
  virtual std::optional<std::vector<double>> token_logprobs(const std::string& text) = 0;
};

/// Deterministic stand-in scorer: pseudo log-probabilities derived from a
/// token hash. Keeps the feature pipeline runnable without a language model.
class HashLogProbScorer : public LogProbScorer {
 public:
  explicit HashLogProbScorer(std::uint64_t seed) : seed_(seed) {}
  std::optional<std::vector<double>> token_logprobs(const std::string& text) override;

 private:
  std::uint64_t seed_;
};

/// exp(-mean per-token log-probability); absent for empty text, a missing
/// scorer, or scorer failure.
std::optional<double> perplexity(const std::string& text, LogProbScorer* scorer);

/// Task-specific feature extraction: the source/target texts are
/// (source, hypothesis) for MTQE, (original, corrected) for GECQE and
/// (sentence, word) for LCP.
FeatureVector compute_features(const Example& example, Task task, LogProbScorer* scorer);

struct FeatureCorrelation {
  std::string feature;
  std::optional<double> r;  // absent: UNDEFINED (fewer than 3 usable pairs)
  double p = 1.0;
  int n = 0;
};

/// Pearson correlation of each feature column against the mode ratio, with
/// pairwise deletion of absent values.
std::vector<FeatureCorrelation> feature_correlation(
    const std::vector<FeatureVector>& features,
    const std::vector<std::optional<double>>& mode_ratios);

}  // namespace judgeaudit
