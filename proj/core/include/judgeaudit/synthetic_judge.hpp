#pragma once

#include <cstdint>

#include "judgeaudit/judge.hpp"

namespace judgeaudit {

/// Deterministic biased-judge stand-in. Each draw emits the mode value with
/// probability lambda(T) and otherwise a rounded, noised copy of the example's
/// gold score, so concentration weakens as temperature rises.
struct SyntheticJudgeParams {
  int mode_value = 8;
  double base_concentration = 0.9;     // lambda0 at the reference temperature
  double reference_temperature = 0.7;
  int noise_halfwidth = 1;
  std::uint64_t seed = 0;
};

/// lambda(T) = clamp(lambda0 * reference_temperature / T, 0, 1).
double effective_concentration(const SyntheticJudgeParams& params, double temperature);

class SyntheticJudge : public Judge {
 public:
  explicit SyntheticJudge(SyntheticJudgeParams params);

  RawGeneration sample(const JudgeRequest& request, const GenerationConfig& cfg) override;

  const SyntheticJudgeParams& params() const { return params_; }

 private:
  SyntheticJudgeParams params_;
};

}  // namespace judgeaudit
