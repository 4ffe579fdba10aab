#include "judgeaudit/http_judge.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "judgeaudit/errors.hpp"

namespace judgeaudit {

using nlohmann::json;

namespace {

constexpr const char* kDefaultPath = "/v1/chat/completions";

// Splits "http://host:port/some/path" into ("http://host:port", "/some/path").
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = endpoint.find('/', host_start);
  if (path_start == std::string::npos || path_start + 1 == endpoint.size()) {
    const auto base = path_start == std::string::npos ? endpoint
                                                      : endpoint.substr(0, path_start);
    return {base, kDefaultPath};
  }
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string judge_api_key_from_env() {
  const char* key = std::getenv("JUDGE_API_KEY");
  return key ? key : "";
}

HttpJudge::HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw ParseError("http backend requires --endpoint");
  }
  std::tie(base_url_, path_) = split_endpoint(config_.endpoint);
}

RawGeneration HttpJudge::sample(const JudgeRequest& request, const GenerationConfig& cfg) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  RawGeneration gen;
  gen.example_id = request.example_id;

  while (static_cast<int>(gen.texts.size()) < cfg.n_samples) {
    const int remaining = cfg.n_samples - static_cast<int>(gen.texts.size());

    json body;
    body["model"] = config_.model;
    body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = cfg.temperature;
    body["max_tokens"] = cfg.max_tokens;
    body["n"] = remaining;
    const std::string payload = body.dump();

    std::string error;
    bool sent = false;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long>(config_.retry_backoff_ms) * attempt));
      }
      auto result = client.Post(path_, headers, payload, "application/json");
      if (!result) {
        error = "connection failed: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status < 200 || result->status >= 300) {
        error = "HTTP status " + std::to_string(result->status);
        if (retryable_status(result->status)) continue;
        throw TransportError("judge request failed for example '" + request.example_id +
                             "': " + error);
      }

      json response;
      try {
        response = json::parse(result->body);
      } catch (const json::exception& err) {
        throw TransportError("unparseable judge response for example '" + request.example_id +
                             "': " + err.what());
      }
      if (!response.contains("choices") || !response["choices"].is_array() ||
          response["choices"].empty()) {
        throw TransportError("judge response for example '" + request.example_id +
                             "' has no choices");
      }
      for (const auto& choice : response["choices"]) {
        if (static_cast<int>(gen.texts.size()) >= cfg.n_samples) break;
        std::string text;
        if (choice.contains("message") && choice["message"].contains("content") &&
            choice["message"]["content"].is_string()) {
          text = choice["message"]["content"].get<std::string>();
        } else if (choice.contains("text") && choice["text"].is_string()) {
          text = choice["text"].get<std::string>();  // legacy completions shape
        }
        gen.texts.push_back(std::move(text));
      }
      sent = true;
      break;
    }
    if (!sent) {
      throw TransportError("judge request failed for example '" + request.example_id +
                           "' after " + std::to_string(config_.max_retries + 1) +
                           " attempts: " + error);
    }
  }
  return gen;
}

}  // namespace judgeaudit
