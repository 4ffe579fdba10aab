#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace judgeaudit {

enum class Task { kMtqe, kGecqe, kLcp };

Task task_from_name(std::string_view name);
std::string_view task_name(Task task);

/// Inclusive integer score bounds as stated in the prompt.
struct ScoreRange {
  int min = 0;
  int max = 9;

  int support_size() const { return max - min + 1; }
  bool contains(double value) const { return value >= min && value <= max; }
};

/// Parses "MIN:MAX" (also accepts "MIN-MAX"). Requires 0 <= min < max.
ScoreRange parse_score_range(std::string_view text);

/// One evaluation instance. Only the fields of the declared task are set.
struct Example {
  std::string id;
  double gold = 0.0;  // original gold-score units
  // mtqe
  std::string source;
  std::string hypothesis;
  std::string source_lang;
  std::string target_lang;
  // gecqe
  std::string original;
  std::string corrected;
  // lcp
  std::string sentence;
  std::string word;
};

/// Loads a line-delimited JSON dataset. Each line is one record with keys
/// "gold" (required), "id" (optional, auto-assigned from the 1-based line
/// number when absent) and the task fields:
///   mtqe:  source, hypothesis, source_lang, target_lang
///   gecqe: original, corrected
///   lcp:   sentence, word
/// Throws ParseError naming the offending line or field.
std::vector<Example> load_dataset(const std::string& path, Task task);

/// Gold-only loader for calibration splits: accepts full records or bare
/// {"gold": ...} lines.
std::vector<double> load_gold_values(const std::string& path);

/// Span of the original gold units a file was annotated in.
struct SourceSpan {
  double lo = 0.0;
  double hi = 100.0;
};

/// DA 0-100 for MTQE, 1-4 quality for GECQE, 0-1 complexity for LCP.
SourceSpan default_source_span(Task task);

struct RescaledGold {
  std::vector<double> values;
  int clamped = 0;  // inputs that fell outside [source_lo, source_hi]
};

/// Linear map of gold scores from [source_lo, source_hi] onto
/// [range.min, range.max]. Out-of-span inputs are clamped first and counted.
RescaledGold rescale_gold(const std::vector<double>& gold, double source_lo,
                          double source_hi, const ScoreRange& range);

}  // namespace judgeaudit
