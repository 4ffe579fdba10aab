#pragma once

#include <string>
#include <vector>

#include "judgeaudit/dataset.hpp"

namespace judgeaudit {

struct GenerationConfig {
  int n_samples = 10;
  double temperature = 0.7;
  int max_tokens = 5;
};

/// Cache key for a generation configuration. Entries recorded under one
/// fingerprint are invisible to reads under another.
std::string config_fingerprint(const GenerationConfig& cfg);

/// The n raw completion texts produced for one example.
struct RawGeneration {
  std::string example_id;
  std::vector<std::string> texts;
};

/// Everything a backend may need to produce generations for one example.
struct JudgeRequest {
  std::string example_id;
  std::string prompt;
  double gold_rescaled = 0.0;  // consumed by the synthetic backend
  ScoreRange range;
};

class Judge {
 public:
  virtual ~Judge() = default;
  virtual RawGeneration sample(const JudgeRequest& request, const GenerationConfig& cfg) = 0;
};

}  // namespace judgeaudit
