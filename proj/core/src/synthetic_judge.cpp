#include "judgeaudit/synthetic_judge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "judgeaudit/errors.hpp"
#include "judgeaudit/rng.hpp"

namespace judgeaudit {

double effective_concentration(const SyntheticJudgeParams& params, double temperature) {
  if (!(temperature > 0.0)) {
    throw NumericError("synthetic judge requires temperature > 0");
  }
  return std::clamp(params.base_concentration * params.reference_temperature / temperature, 0.0,
                    1.0);
}

SyntheticJudge::SyntheticJudge(SyntheticJudgeParams params) : params_(params) {}

RawGeneration SyntheticJudge::sample(const JudgeRequest& request, const GenerationConfig& cfg) {
  if (request.range.min > params_.mode_value || params_.mode_value > request.range.max) {
    throw NumericError("synthetic mode value " + std::to_string(params_.mode_value) +
                       " outside the score range");
  }

  const double lambda = effective_concentration(params_, cfg.temperature);
  SplitMix64 rng(derive_seed(params_.seed, request.example_id));

  RawGeneration gen;
  gen.example_id = request.example_id;
  gen.texts.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (int i = 0; i < cfg.n_samples; ++i) {
    const double u = rng.next_double();
    const std::int64_t jitter =
        params_.noise_halfwidth > 0
            ? rng.next_int(-params_.noise_halfwidth, params_.noise_halfwidth)
            : 0;
    int value;
    if (u < lambda) {
      value = params_.mode_value;
    } else {
      const auto noised = std::lround(request.gold_rescaled) + jitter;
      value = static_cast<int>(
          std::clamp<std::int64_t>(noised, request.range.min, request.range.max));
    }
    gen.texts.push_back(std::to_string(value));
  }
  return gen;
}

}  // namespace judgeaudit
