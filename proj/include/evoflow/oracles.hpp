#pragma once

// Exact, simulation-free reference distributions for the quantities the
// simulator measures. All functions are pure.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evoflow/params.hpp"

namespace evoflow::oracles {

/// Probability mass function on {offset, offset+1, ...}.
struct OraclePmf {
  std::int64_t offset = 0;
  std::vector<double> probabilities;
  /// Mass dropped by truncation (0 when the support was not cut).
  double truncated_mass = 0.0;

  double at(std::int64_t k) const noexcept;
  double total() const noexcept;
  double mean() const noexcept;
};

/// One-step law of |L|: up/stay/down from a positive state, stay_at_zero at 0.
struct LTransition {
  double up = 0.0;
  double stay = 0.0;
  double down = 0.0;
  double stay_at_zero = 0.0;
};

/// Throws ParameterError when p <= 1/2.
LTransition l_transition_probs(const ModelParams& params);

/// Law of |L_n| from |L_0| = 0 by n applications of the tridiagonal
/// transition operator on states 0..cap. Mass pushed above cap is dropped
/// and reported; cap >= n is lossless.
OraclePmf exact_l_pmf(const ModelParams& params, std::size_t n, std::size_t cap);

/// Same law by brute force over all 3^n sequences of coarse step outcomes
/// (birth below the critical value, birth above it, death). Throws
/// ResourceError for n > 16.
OraclePmf enumerate_l_paths(const ModelParams& params, std::size_t n);

/// P_1(T_0 > n) for the simple symmetric walk started at 1 and absorbed at 0.
double srw_survival(std::size_t n);
/// srw_survival(k) for k = 0..n in one pass.
std::vector<double> srw_survival_table(std::size_t n);

/// (1 - success)^(k-1) * success on k >= 1. Throws ParameterError if
/// success is outside (0,1] or k == 0.
double geometric_pmf(double success, std::uint64_t k);

/// C(n,k) p^k (1-p)^(n-k), in log space for n > 50.
/// Throws ParameterError when k > n or p outside [0,1].
double binomial_pmf(std::uint64_t n, double p, std::uint64_t k);

/// Half the L1 distance; shorter supports are zero-extended.
double total_variation(const OraclePmf& a, const OraclePmf& b);

}  // namespace evoflow::oracles
