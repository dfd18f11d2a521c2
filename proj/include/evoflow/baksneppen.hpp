#pragma once

// Bak-Sneppen dynamics on a ring of N sites, kept alongside the main model
// for empirical comparison of the limiting fitness profile.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evoflow/fitness_law.hpp"
#include "evoflow/rng.hpp"

namespace evoflow::baksneppen {

struct BsUpdate {
  std::size_t argmin = 0;
  /// Sites refreshed, in draw order: argmin-1, argmin, argmin+1 (mod N).
  std::array<std::size_t, 3> replaced{};
};

class Ring {
 public:
  /// Sites start i.i.d. from `law`. Throws ParameterError for sites < 3.
  Ring(std::size_t sites, const FitnessLaw& law, std::uint64_t seed);
  /// Explicit initial fitnesses; later replacements still come from `law`.
  Ring(std::vector<double> fitness, const FitnessLaw& law, std::uint64_t seed);

  std::size_t sites() const noexcept { return fitness_.size(); }
  std::span<const double> fitness() const noexcept { return fitness_; }
  const FitnessLaw& law() const noexcept { return law_; }
  std::uint64_t updates() const noexcept { return updates_; }

  /// Replaces the least fit site (lowest index on ties) and its two
  /// neighbours with fresh draws.
  BsUpdate step();

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  std::vector<double> fitness_;
  FitnessLaw law_;
  Mt64Uniform source_;
  std::uint64_t updates_ = 0;
};

/// Pooled snapshots of the full fitness vector.
struct BsSamples {
  std::size_t sites = 0;
  /// Update count (within the bs_run call) at which each snapshot was taken.
  std::vector<std::uint64_t> taken_at;
  /// Snapshot j occupies values[j*sites, (j+1)*sites).
  std::vector<double> values;

  std::size_t snapshots() const noexcept { return taken_at.size(); }
  friend bool operator==(const BsSamples&, const BsSamples&) = default;
};

/// Runs `updates` updates and records the ring after update u whenever
/// u > burn_in and (u - burn_in) is a multiple of sample_every.
/// Throws ParameterError if updates < burn_in or sample_every == 0.
BsSamples bs_run(Ring& ring, std::uint64_t updates, std::uint64_t burn_in,
                 std::uint64_t sample_every);

struct ThresholdEstimate {
  /// 2 * mean - 1: the lower end if the sample were uniform on (f*, 1).
  double moment = 0.0;
  /// 1% sample quantile, a cross-check on the same scale.
  double quantile01 = 0.0;
  std::size_t samples = 0;
};

/// Heuristic threshold estimators on the uniform scale. Throws
/// ParameterError for fewer than 1000 samples.
ThresholdEstimate bs_threshold_estimate(std::span<const double> samples);

/// For a general law: samples are mapped through the law's cdf, estimated on
/// the uniform scale, and mapped back through the quantile function.
ThresholdEstimate bs_threshold_estimate(std::span<const double> samples, const FitnessLaw& law);

struct UpperFit {
  double cut = 0.0;
  std::size_t count = 0;
  /// KS distance of the samples above `cut` from the law conditioned on
  /// (cut, inf); 0 when no sample lies above the cut.
  double ks = 0.0;
};

/// Compares the samples above threshold + margin (the shift taken on the
/// uniform scale) with the law's conditional distribution there.
UpperFit upper_fit(std::span<const double> samples, const FitnessLaw& law, double threshold,
                   double margin = 0.05);

}  // namespace evoflow::baksneppen
