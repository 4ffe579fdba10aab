#include "judgeaudit/replay.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

using nlohmann::ordered_json;

namespace {

std::string entry_key(const std::string& example_id, const std::string& fingerprint) {
  return example_id + '\x1f' + fingerprint;
}

}  // namespace

ReplayWriter::ReplayWriter(const std::string& path, const std::string& header_json)
    : path_(path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path_, ec) ||
                     std::filesystem::file_size(path_, ec) == 0;
  std::ofstream out(path_, std::ios::app);
  if (!out) {
    throw ParseError("cannot open replay cache for writing: " + path_);
  }
  if (fresh && !header_json.empty()) {
    ordered_json line;
    line["header"] = ordered_json::parse(header_json);
    out << line.dump() << '\n';
  }
}

void ReplayWriter::append(const RawGeneration& generation, const std::string& fingerprint) {
  ordered_json line;
  line["example_id"] = generation.example_id;
  line["fingerprint"] = fingerprint;
  line["texts"] = generation.texts;

  std::ofstream out(path_, std::ios::app);
  if (!out) {
    throw ParseError("cannot open replay cache for writing: " + path_);
  }
  out << line.dump() << '\n';
}

ReplayCache::ReplayCache(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open replay cache: " + path);
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const ordered_json::exception& err) {
      throw ParseError("replay cache line " + std::to_string(line_no) + ": " + err.what());
    }
    if (record.contains("header")) {
      header_json_ = record["header"].dump();
      continue;
    }
    const auto id = record.value("example_id", std::string{});
    const auto fingerprint = record.value("fingerprint", std::string{});
    if (id.empty() || !record.contains("texts")) {
      throw ParseError("replay cache line " + std::to_string(line_no) + ": incomplete record");
    }
    // Later entries win, matching append-only semantics.
    entries_[entry_key(id, fingerprint)] = record["texts"].get<std::vector<std::string>>();
  }
}

bool ReplayCache::contains(const std::string& example_id, const std::string& fingerprint) const {
  return entries_.count(entry_key(example_id, fingerprint)) > 0;
}

RawGeneration ReplayCache::lookup(const std::string& example_id,
                                  const std::string& fingerprint) const {
  const auto it = entries_.find(entry_key(example_id, fingerprint));
  if (it == entries_.end()) {
    throw CacheMissError("replay cache miss for example '" + example_id + "' (fingerprint " +
                         fingerprint + ")");
  }
  return {example_id, it->second};
}

ReplayJudge::ReplayJudge(std::shared_ptr<const ReplayCache> cache) : cache_(std::move(cache)) {}

RawGeneration ReplayJudge::sample(const JudgeRequest& request, const GenerationConfig& cfg) {
  return cache_->lookup(request.example_id, config_fingerprint(cfg));
}

}  // namespace judgeaudit
