#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace metareason {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits, identical on every
/// standard library (unlike std::uniform_real_distribution).
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) noexcept { return uniform01(rng) < p; }

/// Draw from Beta(a, b) through two gamma variates.
double sample_beta(Rng& rng, double a, double b);

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0) noexcept;

/// 64-bit FNV-1a. Stable across processes, so it is safe to seed from.
class StableHasher {
 public:
  StableHasher& add_bytes(const void* data, std::size_t size) noexcept;
  StableHasher& add(std::uint64_t value) noexcept { return add_bytes(&value, sizeof value); }
  StableHasher& add(double value) noexcept { return add_bytes(&value, sizeof value); }
  StableHasher& add(std::string_view text) noexcept { return add_bytes(text.data(), text.size()); }
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace metareason
