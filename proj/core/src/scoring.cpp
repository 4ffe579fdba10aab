#include "judgeaudit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

std::optional<double> parse_score(std::string_view text) {
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool signed_digit =
        (c == '-' || c == '+') && i + 1 < text.size() && is_digit(text[i + 1]);
    if (!is_digit(c) && !signed_digit) continue;

    std::size_t end = i + (signed_digit ? 1 : 0);
    while (end < text.size() && is_digit(text[end])) ++end;
    if (end + 1 < text.size() && text[end] == '.' && is_digit(text[end + 1])) {
      ++end;
      while (end < text.size() && is_digit(text[end])) ++end;
    }
    return std::strtod(std::string(text.substr(i, end - i)).c_str(), nullptr);
  }
  return std::nullopt;
}

double clip(double score, const ScoreRange& range) {
  if (!std::isfinite(score)) {
    throw NumericError("clip: non-finite score");
  }
  return std::clamp(score, static_cast<double>(range.min), static_cast<double>(range.max));
}

SampleSet build_sample_set(const RawGeneration& generation, const ScoreRange& range) {
  SampleSet set;
  set.example_id = generation.example_id;
  set.n_raw = static_cast<int>(generation.texts.size());
  for (const auto& text : generation.texts) {
    if (const auto score = parse_score(text)) {
      set.parsed.push_back(*score);
      set.clipped.push_back(clip(*score, range));
    }
  }
  return set;
}

FinalScore aggregate(const SampleSet& samples) {
  FinalScore score;
  score.example_id = samples.example_id;
  score.n_valid = static_cast<int>(samples.clipped.size());
  if (score.n_valid == 0) return score;

  double sum = 0.0;
  for (double value : samples.clipped) sum += value;
  score.value = sum / score.n_valid;
  return score;
}

std::vector<int> rounded_samples(const SampleSet& samples) {
  std::vector<int> rounded;
  rounded.reserve(samples.clipped.size());
  for (double value : samples.clipped) {
    rounded.push_back(static_cast<int>(std::lround(value)));
  }
  return rounded;
}

int dataset_mode(const std::vector<SampleSet>& all_samples, const ScoreRange& range) {
  std::map<int, long> counts;
  for (const auto& set : all_samples) {
    for (int value : rounded_samples(set)) counts[value]++;
  }
  if (counts.empty()) {
    throw DegenerateDistributionError("dataset mode: no valid scores in any example");
  }

  int best = range.min;
  long best_count = -1;
  for (const auto& [value, count] : counts) {  // ascending: >= keeps the larger value on ties
    if (count >= best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

std::optional<double> mode_ratio(const SampleSet& samples, int mode) {
  if (samples.clipped.empty()) return std::nullopt;
  long hits = 0;
  for (int value : rounded_samples(samples)) {
    if (value == mode) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.clipped.size());
}

}  // namespace judgeaudit
