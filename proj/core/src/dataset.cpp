#include "judgeaudit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

using nlohmann::json;

Task task_from_name(std::string_view name) {
  if (name == "mtqe") return Task::kMtqe;
  if (name == "gecqe") return Task::kGecqe;
  if (name == "lcp") return Task::kLcp;
  throw ParseError("unknown task '" + std::string(name) + "' (expected mtqe, gecqe, or lcp)");
}

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kMtqe: return "mtqe";
    case Task::kGecqe: return "gecqe";
    case Task::kLcp: return "lcp";
  }
  return "?";
}

ScoreRange parse_score_range(std::string_view text) {
  const auto sep = text.find_first_of(":-", 1);  // skip a leading sign
  if (sep == std::string_view::npos) {
    throw ParseError("score range must be MIN:MAX, got '" + std::string(text) + "'");
  }
  ScoreRange range;
  try {
    range.min = std::stoi(std::string(text.substr(0, sep)));
    range.max = std::stoi(std::string(text.substr(sep + 1)));
  } catch (const std::exception&) {
    throw ParseError("score range must be MIN:MAX, got '" + std::string(text) + "'");
  }
  if (range.min < 0 || range.min >= range.max) {
    throw ParseError("score range requires 0 <= min < max, got '" + std::string(text) + "'");
  }
  return range;
}

namespace {

std::string require_text_field(const json& record, const char* key, int line_no) {
  if (!record.contains(key) || !record[key].is_string() || record[key].get<std::string>().empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": missing required field '" + key + "'");
  }
  return record[key].get<std::string>();
}

double require_gold(const json& record, int line_no) {
  if (!record.contains("gold") || !record["gold"].is_number()) {
    throw ParseError("line " + std::to_string(line_no) + ": missing required field 'gold'");
  }
  const double gold = record["gold"].get<double>();
  if (!std::isfinite(gold)) {
    throw ParseError("line " + std::to_string(line_no) + ": 'gold' is not finite");
  }
  return gold;
}

}  // namespace

std::vector<Example> load_dataset(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open dataset file: " + path);
  }

  std::vector<Example> examples;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& err) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed record: " + err.what());
    }
    if (!record.is_object()) {
      throw ParseError("line " + std::to_string(line_no) + ": record is not an object");
    }

    Example ex;
    if (record.contains("id")) {
      if (record["id"].is_string()) {
        ex.id = record["id"].get<std::string>();
      } else if (record["id"].is_number_integer()) {
        ex.id = std::to_string(record["id"].get<long long>());
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": 'id' must be a string or integer");
      }
    } else {
      ex.id = std::to_string(line_no);
    }
    ex.gold = require_gold(record, line_no);

    switch (task) {
      case Task::kMtqe:
        ex.source = require_text_field(record, "source", line_no);
        ex.hypothesis = require_text_field(record, "hypothesis", line_no);
        ex.source_lang = require_text_field(record, "source_lang", line_no);
        ex.target_lang = require_text_field(record, "target_lang", line_no);
        break;
      case Task::kGecqe:
        ex.original = require_text_field(record, "original", line_no);
        ex.corrected = require_text_field(record, "corrected", line_no);
        break;
      case Task::kLcp:
        ex.sentence = require_text_field(record, "sentence", line_no);
        ex.word = require_text_field(record, "word", line_no);
        break;
    }

    if (!seen_ids.insert(ex.id).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate example id '" + ex.id + "'");
    }
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::vector<double> load_gold_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open calibration data file: " + path);
  }

  std::vector<double> gold;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& err) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed record: " + err.what());
    }
    gold.push_back(require_gold(record, line_no));
  }
  return gold;
}

SourceSpan default_source_span(Task task) {
  switch (task) {
    case Task::kMtqe: return {0.0, 100.0};
    case Task::kGecqe: return {1.0, 4.0};
    case Task::kLcp: return {0.0, 1.0};
  }
  return {0.0, 100.0};
}

RescaledGold rescale_gold(const std::vector<double>& gold, double source_lo,
                          double source_hi, const ScoreRange& range) {
  if (!(source_lo < source_hi)) {
    throw NumericError("degenerate gold source span [" + std::to_string(source_lo) + ", " +
                       std::to_string(source_hi) + "]");
  }
  const double scale = (range.max - range.min) / (source_hi - source_lo);

  RescaledGold out;
  out.values.reserve(gold.size());
  for (double g : gold) {
    const double clamped = std::clamp(g, source_lo, source_hi);
    if (clamped != g) ++out.clamped;
    out.values.push_back(range.min + (clamped - source_lo) * scale);
  }
  return out;
}

}  // namespace judgeaudit
