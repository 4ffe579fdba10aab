#include "judgeaudit/judge.hpp"

#include <cstdio>

namespace judgeaudit {

std::string config_fingerprint(const GenerationConfig& cfg) {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "n=%d;temp=%.12g;max_tokens=%d", cfg.n_samples,
                cfg.temperature, cfg.max_tokens);
  return buffer;
}

}  // namespace judgeaudit
