#pragma once

#include <string>

#include "judgeaudit/judge.hpp"

namespace judgeaudit {

/// OpenAI-compatible chat-completions endpoint settings. The API key comes
/// from the JUDGE_API_KEY environment variable unless set explicitly.
struct HttpJudgeConfig {
  std::string endpoint;  // base URL, path defaults to /v1/chat/completions
  std::string model;
  std::string api_key;
  int max_retries = 3;
  int retry_backoff_ms = 250;
  int timeout_seconds = 120;
};

class HttpJudge : public Judge {
 public:
  explicit HttpJudge(HttpJudgeConfig config);

  /// Requests cfg.n_samples completions for the prompt. Servers that ignore
  /// the "n" parameter are topped up with sequential requests. Throws
  /// TransportError (carrying the example id) after the retry budget.
  RawGeneration sample(const JudgeRequest& request, const GenerationConfig& cfg) override;

 private:
  HttpJudgeConfig config_;
  std::string base_url_;
  std::string path_;
};

/// Reads JUDGE_API_KEY; empty when unset.
std::string judge_api_key_from_env();

}  // namespace judgeaudit
