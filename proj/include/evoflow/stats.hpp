#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace evoflow::stats {

/// Kolmogorov-Smirnov distance sup |F_n - F| of an ascending sample against
/// a continuous reference cdf. Returns 0 for an empty sample.
template <class Cdf>
double ks_statistic_sorted(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  return ks_statistic_sorted(sample, cdf);
}

/// KS distance of the values inside [lo, hi) against uniform(lo, hi).
double ks_uniform(std::span<const double> sorted, double lo, double hi);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanSe mean_se(std::span<const double> values);
double median(std::vector<double> values);

}  // namespace evoflow::stats
