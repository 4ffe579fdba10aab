#include "judgeaudit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <nlohmann/json.hpp>

#include "judgeaudit/calibration.hpp"
#include "judgeaudit/errors.hpp"
#include "judgeaudit/pipeline.hpp"
#include "judgeaudit/replay.hpp"
#include "judgeaudit/version.hpp"

namespace judgeaudit {

using nlohmann::ordered_json;

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

int default_mode_value(const ScoreRange& range) {
  return std::max(range.min, range.max - 1);
}

SyntheticJudgeParams synthetic_params_for(const AuditOptions& opts, const ScoreRange& range) {
  SyntheticJudgeParams params = opts.synthetic;
  if (opts.seed.has_value()) params.seed = *opts.seed;
  int mode = opts.synthetic_mode.value_or(default_mode_value(range));
  params.mode_value = std::clamp(mode, range.min, range.max);
  return params;
}

std::unique_ptr<Judge> make_backend(const AuditOptions& opts, const ScoreRange& range,
                                    std::shared_ptr<const ReplayCache>& replay_cache) {
  if (opts.backend == "synthetic") {
    if (!opts.seed.has_value()) {
      throw ParseError("the synthetic backend requires --seed");
    }
    return std::make_unique<SyntheticJudge>(synthetic_params_for(opts, range));
  }
  if (opts.backend == "http") {
    HttpJudgeConfig config = opts.http;
    if (config.api_key.empty()) config.api_key = judge_api_key_from_env();
    return std::make_unique<HttpJudge>(config);
  }
  if (opts.backend == "replay") {
    if (opts.cache_path.empty()) {
      throw ParseError("the replay backend requires --cache");
    }
    replay_cache = std::make_shared<const ReplayCache>(opts.cache_path);
    return std::make_unique<ReplayJudge>(replay_cache);
  }
  throw ParseError("unknown backend '" + opts.backend + "' (expected http, synthetic, or replay)");
}

ordered_json range_json(const ScoreRange& range) {
  return {{"min", range.min}, {"max", range.max}};
}

ordered_json histogram_json(const ScoreDistribution& dist) {
  ordered_json j;
  j["support"] = dist.support;
  j["counts"] = dist.counts;
  j["n"] = dist.n;
  return j;
}

ordered_json optional_number(const std::optional<double>& value, const char* degraded_marker) {
  if (value.has_value()) return *value;
  return degraded_marker;
}

/// run_config describes the generation run. For a replay over a cache with a
/// header, the original run's config is reproduced verbatim so a replayed
/// audit emits a byte-identical report.
ordered_json build_run_config(const AuditOptions& opts, const ScoreRange& range,
                              const SourceSpan& span,
                              const std::shared_ptr<const ReplayCache>& replay_cache) {
  if (replay_cache && !replay_cache->header_json().empty()) {
    auto header = ordered_json::parse(replay_cache->header_json());
    const std::string header_task = header.value("task", std::string(task_name(opts.task)));
    if (header_task != task_name(opts.task)) {
      throw ParseError("replay cache was recorded for task '" + header_task + "'");
    }
    if (header.contains("range") &&
        (header["range"].value("min", range.min) != range.min ||
         header["range"].value("max", range.max) != range.max)) {
      throw ParseError("replay cache was recorded for a different score range");
    }
    return header;
  }

  ordered_json config;
  config["data"] = opts.data_path;
  config["task"] = std::string(task_name(opts.task));
  config["range"] = range_json(range);
  config["temperature"] = opts.gen.temperature;
  config["n_samples"] = opts.gen.n_samples;
  config["max_tokens"] = opts.gen.max_tokens;
  config["backend"] = opts.backend;
  if (opts.seed.has_value()) {
    config["seed"] = *opts.seed;
  } else {
    config["seed"] = nullptr;
  }
  config["parallelism"] = opts.parallelism;
  config["source_span"] = {{"lo", span.lo}, {"hi", span.hi}};
  config["template"] = opts.template_path.empty() ? "builtin" : opts.template_path;
  if (opts.backend == "http") {
    config["endpoint"] = opts.http.endpoint;
    config["model"] = opts.http.model;
  }
  if (opts.backend == "synthetic") {
    const auto params = synthetic_params_for(opts, range);
    config["synthetic"] = {{"mode_value", params.mode_value},
                           {"lambda0", params.base_concentration},
                           {"reference_temperature", params.reference_temperature},
                           {"noise_halfwidth", params.noise_halfwidth}};
  }
  if (!opts.cache_path.empty()) config["cache"] = opts.cache_path;
  return config;
}

std::string sidecar_path(const std::string& out_path, const std::string& suffix) {
  const auto dot = out_path.rfind('.');
  const auto slash = out_path.rfind('/');
  const bool has_extension = dot != std::string::npos &&
                             (slash == std::string::npos || dot > slash);
  const std::string stem = has_extension ? out_path.substr(0, dot) : out_path;
  return stem + "_" + suffix + ".csv";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write file: " + path);
  }
  out << content;
}

void write_histogram_csv(const std::string& path, const ScoreDistribution& dist) {
  std::string csv = "support,count\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    csv += std::to_string(dist.support[i]) + "," + std::to_string(dist.counts[i]) + "\n";
  }
  write_file(path, csv);
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
  std::string csv = "setting,temperature,range,kurtosis,r,p,n_valid,error\n";
  for (const auto& entry : sweep.entries) {
    csv += entry.setting.label + "," + format_double(entry.setting.temperature) + "," +
           std::to_string(entry.setting.range.min) + "-" +
           std::to_string(entry.setting.range.max) + ",";
    csv += entry.kurtosis.has_value() ? format_double(*entry.kurtosis) : "DEGENERATE";
    csv += ",";
    csv += entry.r.has_value() ? format_double(*entry.r) : "UNDEFINED";
    csv += "," + format_double(entry.p) + "," + std::to_string(entry.n_valid) + "," +
           entry.error + "\n";
  }
  write_file(path, csv);
}

void write_features_csv(const std::string& path, const std::vector<FeatureCorrelation>& table) {
  std::string csv = "feature,r,p,n\n";
  for (const auto& row : table) {
    csv += row.feature + ",";
    csv += row.r.has_value() ? format_double(*row.r) : "UNDEFINED";
    csv += "," + format_double(row.p) + "," + std::to_string(row.n) + "\n";
  }
  write_file(path, csv);
}

struct LoadedRun {
  std::vector<Example> examples;
  PromptTemplate tmpl;
  SourceSpan span;
  std::shared_ptr<const ReplayCache> replay_cache;
  std::unique_ptr<Judge> judge;
  ordered_json run_config;
};

LoadedRun load_run(const AuditOptions& opts) {
  LoadedRun run;
  run.examples = load_dataset(opts.data_path, opts.task);
  run.tmpl = opts.template_path.empty() ? builtin_template(opts.task)
                                        : load_template_file(opts.template_path, opts.task);
  run.span = opts.source_span.value_or(default_source_span(opts.task));
  run.judge = make_backend(opts, opts.range, run.replay_cache);
  run.run_config = build_run_config(opts, opts.range, run.span, run.replay_cache);
  return run;
}

struct AuditBody {
  LoadedRun run;
  EvaluationResult eval;
  EvaluationMetrics metrics;
  ordered_json report;
};

AuditBody run_audit_body(const AuditOptions& opts, const char* command) {
  AuditBody body;
  body.run = load_run(opts);
  LoadedRun& run = body.run;

  std::unique_ptr<ReplayWriter> cache_writer;
  if (!opts.cache_path.empty() && opts.backend != "replay") {
    cache_writer = std::make_unique<ReplayWriter>(opts.cache_path, run.run_config.dump());
  }

  body.eval = run_evaluation(run.examples, run.tmpl, opts.range, run.span, *run.judge, opts.gen,
                             opts.parallelism, cache_writer.get());
  body.metrics = compute_metrics(body.eval, opts.range);

  const auto& metrics = body.metrics;
  int n_zero_valid = 0;
  for (const auto& score : body.eval.final_scores) {
    if (score.n_valid == 0) ++n_zero_valid;
  }

  ordered_json& report = body.report;
  report["toolkit_version"] = kToolkitVersion;
  report["command"] = command;
  report["run_config"] = run.run_config;
  report["dataset_summary"] = {{"n", metrics.n},
                               {"n_valid", metrics.model.n_valid},
                               {"n_zero_valid", n_zero_valid},
                               {"n_clamped_gold", body.eval.n_clamped_gold}};
  report["distribution"] = {{"model_histogram", histogram_json(metrics.model_histogram)},
                            {"gold_histogram", histogram_json(metrics.gold_histogram)},
                            {"raw_sample_histogram", histogram_json(metrics.raw_sample_histogram)}};

  ordered_json metrics_json;
  metrics_json["kurtosis_model"] = optional_number(metrics.model.kurtosis, "DEGENERATE");
  metrics_json["kurtosis_gold"] = optional_number(metrics.kurtosis_gold, "DEGENERATE");
  metrics_json["r"] = optional_number(metrics.model.r, "UNDEFINED");
  metrics_json["p"] = metrics.model.p.has_value() ? ordered_json(*metrics.model.p)
                                                  : ordered_json(nullptr);
  metrics_json["significant"] = metrics.model.significant.has_value()
                                    ? ordered_json(*metrics.model.significant)
                                    : ordered_json(nullptr);
  if (!metrics.model.note.empty()) metrics_json["note"] = metrics.model.note;
  report["metrics"] = metrics_json;

  ordered_json mode_json;
  mode_json["value"] = metrics.mode_value.has_value() ? ordered_json(*metrics.mode_value)
                                                      : ordered_json(nullptr);
  mode_json["mean_mode_ratio"] = metrics.mean_mode_ratio.has_value()
                                     ? ordered_json(*metrics.mean_mode_ratio)
                                     : ordered_json(nullptr);
  report["mode"] = mode_json;
  return body;
}

void write_audit_sidecars(const AuditOptions& opts, const EvaluationMetrics& metrics) {
  if (opts.out_path.empty()) return;
  write_histogram_csv(sidecar_path(opts.out_path, "model_histogram"), metrics.model_histogram);
  write_histogram_csv(sidecar_path(opts.out_path, "gold_histogram"), metrics.gold_histogram);
  write_histogram_csv(sidecar_path(opts.out_path, "raw_sample_histogram"),
                      metrics.raw_sample_histogram);
}

CommandOutcome finish(const AuditOptions& opts, const ordered_json& report) {
  CommandOutcome outcome;
  outcome.report_json = report.dump(2) + "\n";
  if (!opts.out_path.empty()) {
    write_file(opts.out_path, outcome.report_json);
  }
  return outcome;
}

CommandOutcome fail(const AuditOptions& opts, const char* command, const std::exception& err) {
  ordered_json report;
  report["toolkit_version"] = kToolkitVersion;
  report["command"] = command;
  report["errors"] = ordered_json::array({err.what()});
  std::cerr << command << ": " << err.what() << "\n";

  CommandOutcome outcome;
  outcome.exit_code = 1;
  outcome.report_json = report.dump(2) + "\n";
  if (!opts.out_path.empty()) {
    try {
      write_file(opts.out_path, outcome.report_json);
    } catch (const std::exception&) {
      // the partial report is best-effort
    }
  }
  return outcome;
}

}  // namespace

CommandOutcome cmd_audit(const AuditOptions& opts) {
  try {
    AuditBody body = run_audit_body(opts, "audit");
    write_audit_sidecars(opts, body.metrics);
    return finish(opts, body.report);
  } catch (const std::exception& err) {
    return fail(opts, "audit", err);
  }
}

CommandOutcome cmd_calibrate(const AuditOptions& opts) {
  try {
    AuditBody body = run_audit_body(opts, "calibrate");

    const auto calibration_gold = load_gold_values(opts.calibration_data_path);
    if (calibration_gold.empty()) {
      throw ParseError("calibration data file is empty: " + opts.calibration_data_path);
    }
    const SourceSpan span = opts.source_span.value_or(default_source_span(opts.task));
    const auto rescaled = rescale_gold(calibration_gold, span.lo, span.hi, opts.range);

    const auto params = fit_beta(rescaled.values, opts.range);
    const auto prior = interval_masses(params, opts.range);
    const auto pool = pool_samples(body.eval.sample_sets, opts.marginal_pool);
    const auto marginal = estimate_marginal(pool, opts.range, opts.smoothing);

    const auto calibrated = calibrate_dataset(body.eval.sample_sets, marginal, prior);
    const auto stats = score_statistics(calibrated, body.eval.gold_rescaled);

    std::vector<double> calibrated_values;
    for (const auto& score : calibrated) {
      if (score.value.has_value()) calibrated_values.push_back(*score.value);
    }

    ordered_json block;
    block["alpha"] = params.alpha;
    block["beta"] = params.beta;
    block["newton_converged"] = params.newton_converged;
    block["domain"] = {{"lo", params.domain_lo}, {"hi", params.domain_hi}};
    block["calibration_n_gold"] = calibration_gold.size();
    block["calibration_n_clamped"] = rescaled.clamped;
    block["marginal_pool"] = opts.marginal_pool;
    block["pool_size"] = pool.size();
    block["smoothing"] = opts.smoothing;
    block["marginal_has_zero_mass"] = marginal.has_zero_mass;
    block["p_table"] = marginal.prob;
    block["q_table"] = prior.prob;
    block["kurtosis_calibrated"] = optional_number(stats.kurtosis, "DEGENERATE");
    block["r_calibrated"] = optional_number(stats.r, "UNDEFINED");
    block["p_calibrated"] = stats.p.has_value() ? ordered_json(*stats.p) : ordered_json(nullptr);
    block["significant_calibrated"] =
        stats.significant.has_value() ? ordered_json(*stats.significant) : ordered_json(nullptr);
    if (!stats.note.empty()) block["note"] = stats.note;
    block["calibrated_histogram"] = histogram_json(histogram(calibrated_values, opts.range));
    body.report["calibration"] = block;

    write_audit_sidecars(opts, body.metrics);
    return finish(opts, body.report);
  } catch (const std::exception& err) {
    return fail(opts, "calibrate", err);
  }
}

CommandOutcome cmd_sweep(const AuditOptions& opts) {
  try {
    LoadedRun run = load_run(opts);

    const JudgeFactory factory = [&](const SweepSetting& setting) -> std::unique_ptr<Judge> {
      if (opts.backend == "synthetic") {
        return std::make_unique<SyntheticJudge>(synthetic_params_for(opts, setting.range));
      }
      if (opts.backend == "http") {
        HttpJudgeConfig config = opts.http;
        if (config.api_key.empty()) config.api_key = judge_api_key_from_env();
        return std::make_unique<HttpJudge>(config);
      }
      return std::make_unique<ReplayJudge>(run.replay_cache);
    };

    const SweepResult sweep = run_sweep(run.examples, run.tmpl, run.span, opts.gen, opts.sweep,
                                        factory, opts.parallelism);

    ordered_json report;
    report["toolkit_version"] = kToolkitVersion;
    report["command"] = "sweep";
    report["run_config"] = run.run_config;
    report["run_config"]["sweep_axis"] =
        opts.sweep.axis == SweepAxis::kTemperature ? "temperature" : "range";
    {
      ordered_json temperatures = ordered_json::array();
      for (double t : opts.sweep.temperatures) temperatures.push_back(t);
      report["run_config"]["sweep_temperatures"] = temperatures;
      ordered_json ranges = ordered_json::array();
      for (const auto& r : opts.sweep.ranges) ranges.push_back(range_json(r));
      report["run_config"]["sweep_ranges"] = ranges;
    }

    ordered_json entries = ordered_json::array();
    for (const auto& entry : sweep.entries) {
      ordered_json j;
      j["setting"] = entry.setting.label;
      j["range"] = range_json(entry.setting.range);
      j["temperature"] = entry.setting.temperature;
      j["kurtosis"] = optional_number(entry.kurtosis, "DEGENERATE");
      j["r"] = optional_number(entry.r, "UNDEFINED");
      j["p"] = entry.p;
      j["n_valid"] = entry.n_valid;
      j["error"] = entry.error.empty() ? ordered_json(nullptr) : ordered_json(entry.error);
      entries.push_back(j);
    }
    report["sweep"] = {{"entries", entries},
                       {"best_setting_by_r",
                        sweep.best_setting_by_r.has_value()
                            ? ordered_json(sweep.entries[*sweep.best_setting_by_r].setting.label)
                            : ordered_json(nullptr)}};

    if (!opts.out_path.empty()) {
      write_sweep_csv(sidecar_path(opts.out_path, "sweep"), sweep);
    }
    return finish(opts, report);
  } catch (const std::exception& err) {
    return fail(opts, "sweep", err);
  }
}

CommandOutcome cmd_features(const AuditOptions& opts) {
  try {
    AuditBody body = run_audit_body(opts, "features");

    std::unique_ptr<LogProbScorer> scorer;
    if (opts.ppl_provider == "mock") {
      scorer = std::make_unique<HashLogProbScorer>(opts.seed.value_or(0));
    } else if (opts.ppl_provider != "none") {
      throw ParseError("unknown perplexity provider '" + opts.ppl_provider + "'");
    }

    std::vector<FeatureVector> features;
    features.reserve(body.run.examples.size());
    for (const auto& ex : body.run.examples) {
      features.push_back(compute_features(ex, opts.task, scorer.get()));
    }

    std::vector<std::optional<double>> ratios;
    ratios.reserve(body.eval.sample_sets.size());
    if (body.metrics.mode_value.has_value()) {
      for (const auto& set : body.eval.sample_sets) {
        ratios.push_back(mode_ratio(set, *body.metrics.mode_value));
      }
    } else {
      ratios.assign(body.eval.sample_sets.size(), std::nullopt);
    }

    const auto table = feature_correlation(features, ratios);

    ordered_json rows = ordered_json::array();
    for (const auto& row : table) {
      ordered_json j;
      j["feature"] = row.feature;
      j["r"] = optional_number(row.r, "UNDEFINED");
      j["p"] = row.p;
      j["n"] = row.n;
      rows.push_back(j);
    }
    body.report["features"] = {{"provider", opts.ppl_provider}, {"table", rows}};

    if (!opts.out_path.empty()) {
      write_features_csv(sidecar_path(opts.out_path, "features"), table);
    }
    write_audit_sidecars(opts, body.metrics);
    return finish(opts, body.report);
  } catch (const std::exception& err) {
    return fail(opts, "features", err);
  }
}

}  // namespace judgeaudit
