#include "evoflow/stats.hpp"

#include <cmath>

namespace evoflow::stats {

double ks_uniform(std::span<const double> sorted, double lo, double hi) {
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto last = std::lower_bound(first, sorted.end(), hi);
  const std::span<const double> inside(first, last);
  if (inside.empty()) return 0.0;
  const double width = hi - lo;
  return ks_statistic_sorted(inside, [lo, width](double x) { return (x - lo) / width; });
}

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace evoflow::stats
