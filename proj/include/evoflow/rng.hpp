#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "evoflow/errors.hpp"

namespace evoflow {

/// Uniform [0,1) doubles from a 64-bit Mersenne Twister.
///
/// The engine's output sequence is fixed by the C++ standard and the
/// conversion below uses the top 53 bits, so a seed reproduces the same
/// doubles on every conforming toolchain.
class Mt64Uniform {
 public:
  explicit Mt64Uniform(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  friend bool operator==(const Mt64Uniform&, const Mt64Uniform&) = default;

 private:
  std::mt19937_64 engine_;
};

/// Replays a fixed list of uniforms; throws UsageError once exhausted.
class ScriptedUniforms {
 public:
  explicit ScriptedUniforms(std::vector<double> draws) : draws_(std::move(draws)) {}

  double uniform() {
    if (next_ >= draws_.size()) throw UsageError("scripted uniform source exhausted");
    return draws_[next_++];
  }

  std::size_t consumed() const noexcept { return next_; }

 private:
  std::vector<double> draws_;
  std::size_t next_ = 0;
};

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `index` under `master`: splitmix64(splitmix64(master) ^ index).
/// Stable across versions; distinct indices give distinct seeds because the
/// finaliser is a bijection.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ index);
}

}  // namespace evoflow
