#include "evoflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evoflow/errors.hpp"
#include "evoflow/kernels.hpp"

namespace evoflow::oracles {

double OraclePmf::at(std::int64_t k) const noexcept {
  const std::int64_t i = k - offset;
  if (i < 0 || i >= static_cast<std::int64_t>(probabilities.size())) return 0.0;
  return probabilities[static_cast<std::size_t>(i)];
}

double OraclePmf::total() const noexcept {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

double OraclePmf::mean() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    s += static_cast<double>(offset + static_cast<std::int64_t>(i)) * probabilities[i];
  }
  return s;
}

LTransition l_transition_probs(const ModelParams& params) {
  if (!params.supercritical()) throw ParameterError("|L| chain is defined for p > 1/2");
  LTransition t;
  t.up = params.p() * params.f_c();
  t.down = params.q();
  t.stay = params.p() * (1.0 - params.f_c());
  t.stay_at_zero = 1.0 - t.up;
  return t;
}

OraclePmf exact_l_pmf(const ModelParams& params, std::size_t n, std::size_t cap) {
  const LTransition t = l_transition_probs(params);
  std::vector<double> cur(cap + 1, 0.0);
  std::vector<double> next(cap + 1, 0.0);
  cur[0] = 1.0;
  double lost = 0.0;
  const kernels::StencilCoeffs coeffs{t.up, t.stay, t.down};
  for (std::size_t step = 0; step < n; ++step) {
    if (cap == 0) {
      lost += t.up * cur[0];
      next[0] = t.stay_at_zero * cur[0];
    } else {
      kernels::stencil_interior(cur, next, coeffs);
      next[0] = t.stay_at_zero * cur[0] + t.down * cur[1];
      next[cap] = t.up * cur[cap - 1] + t.stay * cur[cap];
      lost += t.up * cur[cap];
    }
    cur.swap(next);
  }
  OraclePmf out;
  out.probabilities = std::move(cur);
  out.truncated_mass = lost;
  return out;
}

namespace {

struct Enumerator {
  double up;
  double stay;
  double down;
  std::vector<double>& mass;

  // Three coarse outcomes per step: birth below the critical value (up),
  // birth above it (stay), death (down, or stay at 0).
  void walk(std::size_t remaining, std::size_t level, double weight) {
    if (remaining == 0) {
      mass[level] += weight;
      return;
    }
    walk(remaining - 1, level + 1, weight * up);
    walk(remaining - 1, level, weight * stay);
    walk(remaining - 1, level == 0 ? 0 : level - 1, weight * down);
  }
};

}  // namespace

OraclePmf enumerate_l_paths(const ModelParams& params, std::size_t n) {
  if (n > 16) {
    throw ResourceError("enumerate_l_paths visits 3^n paths; n=" + std::to_string(n) +
                        " exceeds the limit of 16");
  }
  const LTransition t = l_transition_probs(params);
  OraclePmf out;
  out.probabilities.assign(n + 1, 0.0);
  Enumerator e{t.up, t.stay, t.down, out.probabilities};
  e.walk(n, 0, 1.0);
  return out;
}

std::vector<double> srw_survival_table(std::size_t n) {
  // Positions 0..n+1; index 0 is the absorbing state and is kept at zero.
  std::vector<double> cur(n + 2, 0.0);
  std::vector<double> next(n + 2, 0.0);
  cur[1] = 1.0;
  std::vector<double> table(n + 1, 0.0);
  table[0] = 1.0;
  const kernels::StencilCoeffs coeffs{0.5, 0.0, 0.5};
  for (std::size_t step = 1; step <= n; ++step) {
    // Reachable positions after `step` moves are at most step + 1.
    const std::size_t width = std::min(n + 2, step + 3);
    kernels::stencil_interior(std::span<const double>(cur.data(), width),
                              std::span<double>(next.data(), width), coeffs);
    next[0] = 0.0;
    if (width == n + 2) next[n + 1] = 0.5 * cur[n];
    double alive = 0.0;
    for (std::size_t j = 1; j < width; ++j) alive += next[j];
    table[step] = alive;
    cur.swap(next);
  }
  return table;
}

double srw_survival(std::size_t n) { return srw_survival_table(n).back(); }

double geometric_pmf(double success, std::uint64_t k) {
  if (!(success > 0.0 && success <= 1.0)) throw ParameterError("geometric success must lie in (0,1]");
  if (k == 0) throw ParameterError("geometric support starts at 1");
  return std::pow(1.0 - success, static_cast<double>(k - 1)) * success;
}

double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (k > n) throw ParameterError("binomial k must satisfy 0 <= k <= n");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial p must lie in [0,1]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double nk = static_cast<double>(n - k);
  const double kk = static_cast<double>(k);
  if (n <= 50) {
    double choose = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) {
      choose = choose * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return choose * std::pow(p, kk) * std::pow(1.0 - p, nk);
  }
  const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(kk + 1.0) -
                            std::lgamma(nk + 1.0);
  return std::exp(log_choose + kk * std::log(p) + nk * std::log1p(-p));
}

double total_variation(const OraclePmf& a, const OraclePmf& b) {
  const std::int64_t lo = std::min(a.offset, b.offset);
  const std::int64_t hi =
      std::max(a.offset + static_cast<std::int64_t>(a.probabilities.size()),
               b.offset + static_cast<std::int64_t>(b.probabilities.size()));
  double l1 = 0.0;
  for (std::int64_t k = lo; k < hi; ++k) l1 += std::abs(a.at(k) - b.at(k));
  return 0.5 * l1;
}

}  // namespace evoflow::oracles
