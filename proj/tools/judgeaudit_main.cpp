// judgeaudit: score-based LLM-judge evaluation with numerical-bias audits.
//
// Subcommands: audit, calibrate, sweep, features. Each runs the
// generate -> parse -> clip -> average pipeline against the selected backend
// and writes a machine-readable report plus CSV sidecars.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "judgeaudit/dataset.hpp"
#include "judgeaudit/errors.hpp"
#include "judgeaudit/report.hpp"
#include "judgeaudit/version.hpp"

namespace {

struct CliState {
  judgeaudit::AuditOptions opts;
  std::string range_text = "0:9";
  std::string task_text = "mtqe";
  std::string source_span_text;
  std::int64_t seed = -1;  // <0: unset
  int synthetic_mode = -1;  // <0: auto per range
  std::string sweep_axis = "temperature";
  std::vector<double> sweep_temperatures;
  std::vector<std::string> sweep_ranges;
};

void add_shared_flags(CLI::App* cmd, CliState& state) {
  auto& opts = state.opts;
  cmd->add_option("--data", opts.data_path, "Dataset file (line-delimited JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--task", state.task_text, "Task: mtqe, gecqe, or lcp")
      ->check(CLI::IsMember({"mtqe", "gecqe", "lcp"}));
  cmd->add_option("--range", state.range_text, "Score range MIN:MAX (default 0:9)");
  cmd->add_option("--temperature", opts.gen.temperature, "Sampling temperature (default 0.7)");
  cmd->add_option("--samples", opts.gen.n_samples, "Generations per example (default 10)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-tokens", opts.gen.max_tokens, "max_tokens per generation (default 5)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--backend", opts.backend, "Judge backend: http, synthetic, or replay")
      ->check(CLI::IsMember({"http", "synthetic", "replay"}));
  cmd->add_option("--endpoint", opts.http.endpoint,
                  "HTTP backend: OpenAI-compatible base URL");
  cmd->add_option("--model", opts.http.model, "HTTP backend: model name");
  cmd->add_option("--seed", state.seed, "PRNG seed (required for the synthetic backend)");
  cmd->add_option("--parallelism", opts.parallelism, "Concurrent judge requests (default 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_path, "Report path; CSV sidecars share its stem");
  cmd->add_option("--cache", opts.cache_path,
                  "Replay cache path (records when generating, source when replaying)");
  cmd->add_option("--template", opts.template_path, "Custom prompt template file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--source-span", state.source_span_text,
                  "Original gold-score span LO:HI (default per task)");
  cmd->add_option("--synthetic-mode", state.synthetic_mode,
                  "Synthetic backend: mode value (default: range max - 1)");
  cmd->add_option("--synthetic-lambda0", opts.synthetic.base_concentration,
                  "Synthetic backend: concentration at the reference temperature (default 0.9)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--synthetic-ref-temperature", opts.synthetic.reference_temperature,
                  "Synthetic backend: reference temperature (default 0.7)");
  cmd->add_option("--synthetic-noise", opts.synthetic.noise_halfwidth,
                  "Synthetic backend: gold jitter half-width (default 1)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-retries", opts.http.max_retries,
                  "HTTP backend: retries per request (default 3)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--retry-backoff-ms", opts.http.retry_backoff_ms,
                  "HTTP backend: backoff unit in ms (default 250)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--timeout", opts.http.timeout_seconds,
                  "HTTP backend: per-request timeout in seconds (default 120)")
      ->check(CLI::PositiveNumber);
}

void finalize_options(CliState& state) {
  auto& opts = state.opts;
  opts.task = judgeaudit::task_from_name(state.task_text);
  opts.range = judgeaudit::parse_score_range(state.range_text);
  if (state.seed >= 0) {
    opts.seed = static_cast<std::uint64_t>(state.seed);
  }
  if (state.synthetic_mode >= 0) {
    opts.synthetic_mode = state.synthetic_mode;
  }
  if (!state.source_span_text.empty()) {
    const auto colon = state.source_span_text.find(':');
    if (colon == std::string::npos) {
      throw judgeaudit::ParseError("--source-span must be LO:HI");
    }
    judgeaudit::SourceSpan span;
    span.lo = std::stod(state.source_span_text.substr(0, colon));
    span.hi = std::stod(state.source_span_text.substr(colon + 1));
    opts.source_span = span;
  }

  if (state.sweep_axis == "range") {
    opts.sweep.axis = judgeaudit::SweepAxis::kRange;
  } else {
    opts.sweep.axis = judgeaudit::SweepAxis::kTemperature;
  }
  if (!state.sweep_temperatures.empty()) {
    opts.sweep.temperatures = state.sweep_temperatures;
  }
  if (!state.sweep_ranges.empty()) {
    opts.sweep.ranges.clear();
    for (const auto& text : state.sweep_ranges) {
      opts.sweep.ranges.push_back(judgeaudit::parse_score_range(text));
    }
  }
  opts.sweep.fixed_temperature = opts.gen.temperature;
  opts.sweep.fixed_range = opts.range;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical-bias audits for score-based LLM-as-a-judge pipelines"};
  app.set_version_flag("--version", judgeaudit::kToolkitVersion);
  app.require_subcommand(1);

  CliState audit_state;
  CLI::App* audit = app.add_subcommand("audit", "Run the evaluation pipeline and audit bias");
  add_shared_flags(audit, audit_state);

  CliState calibrate_state;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Audit plus generative calibration of final scores");
  add_shared_flags(calibrate, calibrate_state);
  calibrate->add_option("--calibration-data", calibrate_state.opts.calibration_data_path,
                        "Gold-score file used to fit the Beta prior")
      ->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--marginal-pool", calibrate_state.opts.marginal_pool,
                        "Samples pooled to estimate p(y) (default 1000; 0 = all)");
  calibrate->add_option("--smoothing", calibrate_state.opts.smoothing,
                        "Additive smoothing for p(y) (default 1)")
      ->check(CLI::NonNegativeNumber);

  CliState sweep_state;
  CLI::App* sweep = app.add_subcommand("sweep", "Temperature or score-range mitigation sweep");
  add_shared_flags(sweep, sweep_state);
  sweep->add_option("--axis", sweep_state.sweep_axis, "Sweep axis: temperature or range")
      ->check(CLI::IsMember({"temperature", "range"}));
  sweep->add_option("--temperatures", sweep_state.sweep_temperatures,
                    "Temperatures to sweep (default 0.4,0.7,1.0,1.3)")
      ->delimiter(',');
  sweep->add_option("--ranges", sweep_state.sweep_ranges,
                    "Score ranges to sweep (default 1:5,0:9,1:100)")
      ->delimiter(',');

  CliState features_state;
  CLI::App* features =
      app.add_subcommand("features", "Correlate input features with per-example mode ratios");
  add_shared_flags(features, features_state);
  features->add_option("--ppl-provider", features_state.opts.ppl_provider,
                       "Perplexity provider: none or mock (default none)")
      ->check(CLI::IsMember({"none", "mock"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) {
      return app.exit(err);  // --help / --version
    }
    app.exit(err);
    return 2;
  }

  const auto run = [](CliState& state, auto command) {
    finalize_options(state);
    const judgeaudit::CommandOutcome outcome = command(state.opts);
    // The report goes to stdout only when --out is not given.
    if (outcome.exit_code == 0 && state.opts.out_path.empty()) {
      std::cout << outcome.report_json;
    }
    return outcome.exit_code;
  };

  try {
    if (audit->parsed()) return run(audit_state, judgeaudit::cmd_audit);
    if (calibrate->parsed()) return run(calibrate_state, judgeaudit::cmd_calibrate);
    if (sweep->parsed()) return run(sweep_state, judgeaudit::cmd_sweep);
    if (features->parsed()) return run(features_state, judgeaudit::cmd_features);
    return 2;
  } catch (const judgeaudit::ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
