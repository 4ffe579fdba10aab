#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "judgeaudit/dataset.hpp"
#include "judgeaudit/judge.hpp"

namespace judgeaudit {

/// Parsed and clipped samples for one example.
struct SampleSet {
  std::string example_id;
  std::vector<double> parsed;   // valid numeric parses, generation order
  int n_raw = 0;                // generations before filtering
  std::vector<double> clipped;  // same length as parsed, within the range
};

struct FinalScore {
  std::string example_id;
  std::optional<double> value;  // absent iff n_valid == 0
  int n_valid = 0;
};

/// First decimal number (optional sign, optional fractional part) found while
/// scanning the text; nullopt when no digit sequence exists.
std::optional<double> parse_score(std::string_view text);

/// min(max(score, range.min), range.max). Throws NumericError on non-finite
/// input.
double clip(double score, const ScoreRange& range);

/// parse -> filter -> clip over one generation's texts.
SampleSet build_sample_set(const RawGeneration& generation, const ScoreRange& range);

/// Mean of the clipped samples; absent when no sample parsed.
FinalScore aggregate(const SampleSet& samples);

/// Samples rounded to integers (the unit histograms and calibration run on).
std::vector<int> rounded_samples(const SampleSet& samples);

/// The most frequent rounded score pooled across all examples; ties break
/// toward the larger value. Throws DegenerateDistributionError when no valid
/// score exists anywhere.
int dataset_mode(const std::vector<SampleSet>& all_samples, const ScoreRange& range);

/// Fraction of this example's rounded samples equal to the dataset mode;
/// absent when the example has no valid samples.
std::optional<double> mode_ratio(const SampleSet& samples, int mode);

}  // namespace judgeaudit
