#pragma once

#include <memory>
#include <string>
#include <unordered_map>

#include "judgeaudit/judge.hpp"

namespace judgeaudit {

/// Appends judge transcripts to a line-delimited cache file. The first line
/// of a fresh cache is a header carrying the originating run configuration
/// (serialized JSON); records follow, one per (example, config fingerprint).
class ReplayWriter {
 public:
  /// Opens `path` for appending. `header_json` is written first when the
  /// cache is new; pass an empty string to skip the header.
  ReplayWriter(const std::string& path, const std::string& header_json);

  void append(const RawGeneration& generation, const std::string& fingerprint);

 private:
  std::string path_;
};

/// Loads a replay cache into memory for verbatim playback.
class ReplayCache {
 public:
  explicit ReplayCache(const std::string& path);

  /// Cached texts for (example_id, fingerprint); throws CacheMissError.
  RawGeneration lookup(const std::string& example_id, const std::string& fingerprint) const;

  bool contains(const std::string& example_id, const std::string& fingerprint) const;

  /// The run-configuration JSON recorded when the cache was created; empty
  /// when the cache has no header.
  const std::string& header_json() const { return header_json_; }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
  std::string header_json_;
};

/// Judge backend that answers every request from a recorded cache and never
/// contacts the network.
class ReplayJudge : public Judge {
 public:
  explicit ReplayJudge(std::shared_ptr<const ReplayCache> cache);

  RawGeneration sample(const JudgeRequest& request, const GenerationConfig& cfg) override;

 private:
  std::shared_ptr<const ReplayCache> cache_;
};

}  // namespace judgeaudit
