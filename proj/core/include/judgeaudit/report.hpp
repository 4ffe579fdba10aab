#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "judgeaudit/analysis.hpp"
#include "judgeaudit/dataset.hpp"
#include "judgeaudit/http_judge.hpp"
#include "judgeaudit/judge.hpp"
#include "judgeaudit/synthetic_judge.hpp"

namespace judgeaudit {

/// Everything the CLI collects. One options struct serves all four commands;
/// command-specific fields are ignored elsewhere.
struct AuditOptions {
  std::string data_path;
  Task task = Task::kMtqe;
  ScoreRange range{0, 9};
  GenerationConfig gen;
  std::string backend = "synthetic";  // http | synthetic | replay
  std::optional<std::uint64_t> seed;  // mandatory for the synthetic backend
  SyntheticJudgeParams synthetic;
  std::optional<int> synthetic_mode;  // absent: range.max - 1 per setting
  HttpJudgeConfig http;
  std::string cache_path;
  int parallelism = 1;
  std::optional<SourceSpan> source_span;  // absent: task default
  std::string template_path;              // empty: built-in template
  std::string out_path;                    // empty: report not written to disk

  // calibrate
  std::string calibration_data_path;
  int marginal_pool = 1000;
  double smoothing = 1.0;

  // sweep
  SweepSpec sweep;

  // features
  std::string ppl_provider = "none";  // none | mock
};

struct CommandOutcome {
  int exit_code = 0;
  std::string report_json;
};

/// generate -> score -> metrics; writes the report and histogram CSVs.
CommandOutcome cmd_audit(const AuditOptions& opts);

/// Audit plus the fitted gold prior, estimated label marginal, and calibrated
/// metrics side by side with the raw ones.
CommandOutcome cmd_calibrate(const AuditOptions& opts);

/// Temperature or score-range sweep; per-setting metrics and the best setting
/// by correlation.
CommandOutcome cmd_sweep(const AuditOptions& opts);

/// Input-feature table (length, overlap, perplexities) correlated against
/// per-example mode ratios.
CommandOutcome cmd_features(const AuditOptions& opts);

}  // namespace judgeaudit
