#pragma once

#include <cstdint>
#include <string_view>

namespace judgeaudit {

/// Deterministic 64-bit generator (splitmix64). Replay transcripts and golden
/// reports must be bit-identical across platforms, which standard-library
/// engines and distributions do not guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], endpoints included.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
    const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

/// Mixes a base seed with a string key into an independent stream seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  SplitMix64 mixer(seed ^ fnv1a64(key));
  return mixer.next_u64();
}

}  // namespace judgeaudit
