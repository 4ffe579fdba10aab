#include <doctest.h>

#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/http_judge.hpp"
#include "judgeaudit/judge.hpp"
#include "judgeaudit/replay.hpp"
#include "judgeaudit/synthetic_judge.hpp"

#include "test_utils.hpp"

using namespace judgeaudit;

namespace {

JudgeRequest request_for(const std::string& id, double gold, ScoreRange range = {0, 9}) {
  JudgeRequest request;
  request.example_id = id;
  request.prompt = "prompt";
  request.gold_rescaled = gold;
  request.range = range;
  return request;
}

SyntheticJudgeParams biased_params(double lambda0, int noise = 1, std::uint64_t seed = 42) {
  SyntheticJudgeParams params;
  params.mode_value = 8;
  params.base_concentration = lambda0;
  params.reference_temperature = 0.7;
  params.noise_halfwidth = noise;
  params.seed = seed;
  return params;
}

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit LocalServer(const std::function<void(const httplib::Request&, httplib::Response&)>& handler) {
    server.Post("/v1/chat/completions", handler);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~LocalServer() {
    server.stop();
    thread.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("a fully concentrated synthetic judge only emits the mode") {
  SyntheticJudge judge(biased_params(1.0));
  GenerationConfig cfg;
  const auto gen = judge.sample(request_for("e1", 2.0), cfg);
  CHECK(gen.texts == std::vector<std::string>(10, "8"));
}

TEST_CASE("an unconcentrated noise-free synthetic judge rounds the gold score") {
  SyntheticJudge judge(biased_params(0.0, 0));
  GenerationConfig cfg;
  const auto gen = judge.sample(request_for("e1", 3.2), cfg);
  CHECK(gen.texts == std::vector<std::string>(10, "3"));
}

TEST_CASE("synthetic transcripts are deterministic per (seed, example, config)") {
  SyntheticJudge judge_a(biased_params(0.9));
  SyntheticJudge judge_b(biased_params(0.9));
  GenerationConfig cfg;
  const auto first = judge_a.sample(request_for("e7", 4.0), cfg);
  const auto second = judge_b.sample(request_for("e7", 4.0), cfg);
  CHECK(first.texts == second.texts);

  const auto other_example = judge_a.sample(request_for("e8", 4.0), cfg);
  CHECK(first.texts != other_example.texts);

  SyntheticJudge other_seed(biased_params(0.9, 1, 43));
  CHECK(other_seed.sample(request_for("e7", 4.0), cfg).texts != first.texts);
}

TEST_CASE("the frozen synthetic golden transcript stays stable") {
  SyntheticJudge judge(biased_params(0.9));
  GenerationConfig cfg;
  const auto gen = judge.sample(request_for("g3", 3.0), cfg);
  // 9 of 10 draws hit the mode at lambda = 0.9; one falls back to noised gold.
  const std::vector<std::string> expected = {"8", "8", "8", "8", "8",
                                             "8", "8", "2", "8", "8"};
  CHECK(gen.texts == expected);
}

TEST_CASE("effective concentration is clamped and non-increasing in temperature") {
  const auto params = biased_params(0.9);
  double previous = 1.1;
  for (const double t : {0.4, 0.7, 1.0, 1.3}) {
    const double lambda = effective_concentration(params, t);
    CHECK(lambda >= 0.0);
    CHECK(lambda <= 1.0);
    CHECK(lambda <= previous);
    previous = lambda;
  }
  CHECK(effective_concentration(params, 0.7) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(effective_concentration(params, 0.4) == 1.0);  // clamped
  CHECK_THROWS_AS(effective_concentration(params, 0.0), NumericError);
}

TEST_CASE("the empirical mode frequency converges to lambda") {
  SyntheticJudge judge(biased_params(0.9));
  GenerationConfig cfg;
  cfg.n_samples = 10000;
  // gold 3 with halfwidth 1 never lands on the mode 8.
  const auto gen = judge.sample(request_for("freq", 3.0), cfg);
  long hits = 0;
  for (const auto& text : gen.texts) {
    if (text == "8") ++hits;
  }
  const double freq = static_cast<double>(hits) / 10000.0;
  const double se = std::sqrt(0.9 * 0.1 / 10000.0);
  CHECK(std::fabs(freq - 0.9) <= 3.0 * se);
}

TEST_CASE("synthetic judge rejects a mode outside the range") {
  auto params = biased_params(0.9);
  params.mode_value = 12;
  SyntheticJudge judge(params);
  GenerationConfig cfg;
  CHECK_THROWS_AS(judge.sample(request_for("e1", 3.0), cfg), NumericError);
}

TEST_CASE("replay cache round-trips verbatim and misses cleanly") {
  const auto dir = testutil::fresh_temp_dir("replay");
  const auto path = (dir / "cache.jsonl").string();

  GenerationConfig cfg;
  const std::string fingerprint = config_fingerprint(cfg);
  {
    ReplayWriter writer(path, R"({"backend":"synthetic","seed":7})");
    writer.append({"e1", {"8", "7.5", "weird text"}}, fingerprint);
    writer.append({"e2", {"9"}}, fingerprint);
  }

  const ReplayCache cache(path);
  CHECK(cache.header_json() == R"({"backend":"synthetic","seed":7})");
  CHECK(cache.contains("e1", fingerprint));
  const auto replayed = cache.lookup("e1", fingerprint);
  CHECK(replayed.texts == std::vector<std::string>{"8", "7.5", "weird text"});

  CHECK_THROWS_AS(cache.lookup("missing", fingerprint), CacheMissError);

  ReplayJudge judge(std::make_shared<const ReplayCache>(cache));
  GenerationConfig hot = cfg;
  hot.temperature = 1.0;  // fingerprint mismatch
  CHECK_THROWS_AS(judge.sample(request_for("e1", 0.0), hot), CacheMissError);
  CHECK(judge.sample(request_for("e2", 0.0), cfg).texts == std::vector<std::string>{"9"});
}

TEST_CASE("config fingerprints distinguish generation settings") {
  GenerationConfig cfg;
  const auto base = config_fingerprint(cfg);
  GenerationConfig hot = cfg;
  hot.temperature = 1.0;
  CHECK(base != config_fingerprint(hot));
  GenerationConfig more = cfg;
  more.n_samples = 20;
  CHECK(base != config_fingerprint(more));
  CHECK(base == config_fingerprint(GenerationConfig{}));
}

TEST_CASE("http judge collects n choices from a batching server") {
  LocalServer server([](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    const int n = body.value("n", 1);
    nlohmann::json choices = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      choices.push_back({{"message", {{"role", "assistant"}, {"content", "8"}}}});
    }
    res.set_content(nlohmann::json{{"choices", choices}}.dump(), "application/json");
  });

  HttpJudgeConfig config;
  config.endpoint = server.endpoint();
  config.model = "test-model";
  HttpJudge judge(config);
  const auto gen = judge.sample(request_for("e1", 0.0), GenerationConfig{});
  CHECK(gen.texts == std::vector<std::string>(10, "8"));
}

TEST_CASE("http judge tops up when the server ignores n") {
  std::atomic<int> calls{0};
  const std::vector<std::string> script = {"7", "8", "bad"};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    const int index = calls.fetch_add(1);
    nlohmann::json choice = {
        {"message", {{"role", "assistant"}, {"content", script[index % script.size()]}}}};
    res.set_content(nlohmann::json{{"choices", nlohmann::json::array({choice})}}.dump(),
                    "application/json");
  });

  HttpJudgeConfig config;
  config.endpoint = server.endpoint();
  config.model = "test-model";
  HttpJudge judge(config);
  GenerationConfig cfg;
  cfg.n_samples = 3;
  const auto gen = judge.sample(request_for("e1", 0.0), cfg);
  CHECK(gen.texts == script);  // no filtering at this stage
  CHECK(calls.load() == 3);
}

TEST_CASE("http judge fails after the retry budget on persistent 500s") {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.status = 500;
    res.set_content("boom", "text/plain");
  });

  HttpJudgeConfig config;
  config.endpoint = server.endpoint();
  config.model = "test-model";
  config.max_retries = 2;
  config.retry_backoff_ms = 1;
  HttpJudge judge(config);
  CHECK_THROWS_WITH_AS(judge.sample(request_for("e9", 0.0), GenerationConfig{}),
                       doctest::Contains("e9"), TransportError);
  CHECK(calls.load() == 3);  // initial try + 2 retries
}

TEST_CASE("http judge reports non-retryable statuses immediately") {
  LocalServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
    res.set_content("denied", "text/plain");
  });

  HttpJudgeConfig config;
  config.endpoint = server.endpoint();
  config.model = "test-model";
  config.retry_backoff_ms = 1;
  HttpJudge judge(config);
  CHECK_THROWS_WITH_AS(judge.sample(request_for("e1", 0.0), GenerationConfig{}),
                       doctest::Contains("401"), TransportError);
}
