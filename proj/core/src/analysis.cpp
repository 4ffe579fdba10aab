#include "judgeaudit/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/pipeline.hpp"
#include "judgeaudit/rng.hpp"
#include "judgeaudit/stats.hpp"

namespace judgeaudit {

namespace {

std::vector<std::string> lowercase_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string temperature_label(double t) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "T=%g", t);
  return buffer;
}

std::string range_label(const ScoreRange& range) {
  return std::to_string(range.min) + "-" + std::to_string(range.max);
}

}  // namespace

std::vector<SweepSetting> expand_sweep_settings(const SweepSpec& spec) {
  std::vector<SweepSetting> settings;
  if (spec.axis == SweepAxis::kTemperature) {
    for (double t : spec.temperatures) {
      settings.push_back({temperature_label(t), spec.fixed_range, t});
    }
  } else {
    for (const auto& range : spec.ranges) {
      settings.push_back({range_label(range), range, spec.fixed_temperature});
    }
  }
  if (settings.empty()) {
    throw ParseError("sweep spec has no settings on its axis");
  }
  return settings;
}

SweepResult run_sweep(const std::vector<Example>& examples, const PromptTemplate& tmpl,
                      const SourceSpan& source_span, const GenerationConfig& base_cfg,
                      const SweepSpec& spec, const JudgeFactory& make_judge, int parallelism) {
  SweepResult result;
  for (const auto& setting : expand_sweep_settings(spec)) {
    SweepEntry entry;
    entry.setting = setting;
    try {
      GenerationConfig cfg = base_cfg;
      cfg.temperature = setting.temperature;
      auto judge = make_judge(setting);
      const auto eval = run_evaluation(examples, tmpl, setting.range, source_span, *judge, cfg,
                                       parallelism, nullptr);
      const auto stats = score_statistics(eval.final_scores, eval.gold_rescaled);
      entry.kurtosis = stats.kurtosis;
      entry.r = stats.r;
      entry.p = stats.p.value_or(1.0);
      entry.n_valid = stats.n_valid;
    } catch (const std::exception& err) {
      entry.error = err.what();
    }
    result.entries.push_back(std::move(entry));
  }

  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& r = result.entries[i].r;
    if (!r.has_value()) continue;
    if (!result.best_setting_by_r.has_value() ||
        *r > *result.entries[*result.best_setting_by_r].r) {
      result.best_setting_by_r = i;
    }
  }
  return result;
}

double word_overlap(std::string_view a, std::string_view b) {
  const auto tokens_a = lowercase_tokens(a);
  const auto tokens_b = lowercase_tokens(b);
  const std::unordered_set<std::string> set_a(tokens_a.begin(), tokens_a.end());
  const std::unordered_set<std::string> set_b(tokens_b.begin(), tokens_b.end());

  if (set_a.empty() && set_b.empty()) return 1.0;
  if (set_a.empty() || set_b.empty()) return 0.0;

  std::size_t intersection = 0;
  for (const auto& token : set_a) {
    if (set_b.count(token)) ++intersection;
  }
  const std::size_t union_size = set_a.size() + set_b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(union_size);
}

std::optional<std::vector<double>> HashLogProbScorer::token_logprobs(const std::string& text) {
  std::vector<double> logprobs;
  for (const auto& token : lowercase_tokens(text)) {
    SplitMix64 rng(derive_seed(seed_, token));
    logprobs.push_back(-(0.5 + 3.0 * rng.next_double()));
  }
  return logprobs;
}

std::optional<double> perplexity(const std::string& text, LogProbScorer* scorer) {
  if (scorer == nullptr || text.empty()) return std::nullopt;
  const auto logprobs = scorer->token_logprobs(text);
  if (!logprobs.has_value() || logprobs->empty()) return std::nullopt;

  double sum = 0.0;
  for (double lp : *logprobs) sum += lp;
  return std::exp(-sum / static_cast<double>(logprobs->size()));
}

FeatureVector compute_features(const Example& example, Task task, LogProbScorer* scorer) {
  const std::string* source = nullptr;
  const std::string* target = nullptr;
  switch (task) {
    case Task::kMtqe:
      source = &example.source;
      target = &example.hypothesis;
      break;
    case Task::kGecqe:
      source = &example.original;
      target = &example.corrected;
      break;
    case Task::kLcp:
      source = &example.sentence;
      target = &example.word;
      break;
  }

  FeatureVector features;
  features.source_length = static_cast<int>(lowercase_tokens(*source).size());
  features.word_overlap = word_overlap(*source, *target);
  features.source_ppl = perplexity(*source, scorer);
  features.target_ppl = perplexity(*target, scorer);
  features.overall_ppl = perplexity(*source + " " + *target, scorer);
  return features;
}

std::vector<FeatureCorrelation> feature_correlation(
    const std::vector<FeatureVector>& features,
    const std::vector<std::optional<double>>& mode_ratios) {
  if (features.size() != mode_ratios.size()) {
    throw NumericError("feature_correlation: length mismatch");
  }

  struct Column {
    const char* name;
    std::function<std::optional<double>(const FeatureVector&)> get;
  };
  const std::vector<Column> columns = {
      {"source_length",
       [](const FeatureVector& f) { return std::optional<double>(f.source_length); }},
      {"word_overlap",
       [](const FeatureVector& f) { return std::optional<double>(f.word_overlap); }},
      {"source_ppl", [](const FeatureVector& f) { return f.source_ppl; }},
      {"target_ppl", [](const FeatureVector& f) { return f.target_ppl; }},
      {"overall_ppl", [](const FeatureVector& f) { return f.overall_ppl; }},
  };

  std::vector<FeatureCorrelation> table;
  table.reserve(columns.size());
  for (const auto& column : columns) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto x = column.get(features[i]);
      if (x.has_value() && mode_ratios[i].has_value()) {
        xs.push_back(*x);
        ys.push_back(*mode_ratios[i]);
      }
    }

    FeatureCorrelation row;
    row.feature = column.name;
    row.n = static_cast<int>(xs.size());
    if (xs.size() >= 3) {
      try {
        const auto corr = pearson(xs, ys);
        row.r = corr.r;
        row.p = corr.p_value;
      } catch (const DegenerateDistributionError&) {
        // constant column or constant ratios: UNDEFINED
      }
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace judgeaudit
