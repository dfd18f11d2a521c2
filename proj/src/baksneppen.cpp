#include "evoflow/baksneppen.hpp"

#include <algorithm>
#include <cmath>

#include "evoflow/errors.hpp"
#include "evoflow/kernels.hpp"
#include "evoflow/stats.hpp"

namespace evoflow::baksneppen {

Ring::Ring(std::size_t sites, const FitnessLaw& law, std::uint64_t seed)
    : law_(law), source_(seed) {
  if (sites < 3) throw ParameterError("Bak-Sneppen ring needs at least 3 sites");
  fitness_.resize(sites);
  for (double& f : fitness_) f = law_.sample(source_);
}

Ring::Ring(std::vector<double> fitness, const FitnessLaw& law, std::uint64_t seed)
    : fitness_(std::move(fitness)), law_(law), source_(seed) {
  if (fitness_.size() < 3) throw ParameterError("Bak-Sneppen ring needs at least 3 sites");
}

BsUpdate Ring::step() {
  const std::size_t n = fitness_.size();
  BsUpdate u;
  u.argmin = kernels::argmin(fitness_);
  u.replaced = {(u.argmin + n - 1) % n, u.argmin, (u.argmin + 1) % n};
  for (std::size_t site : u.replaced) fitness_[site] = law_.sample(source_);
  ++updates_;
  return u;
}

BsSamples bs_run(Ring& ring, std::uint64_t updates, std::uint64_t burn_in,
                 std::uint64_t sample_every) {
  if (updates < burn_in) throw ParameterError("bs_run needs updates >= burn_in");
  if (sample_every == 0) throw ParameterError("bs_run needs sample_every >= 1");
  BsSamples out;
  out.sites = ring.sites();
  const std::uint64_t expected = (updates - burn_in) / sample_every;
  out.taken_at.reserve(expected);
  out.values.reserve(expected * ring.sites());
  for (std::uint64_t u = 1; u <= updates; ++u) {
    ring.step();
    if (u > burn_in && (u - burn_in) % sample_every == 0) {
      out.taken_at.push_back(u);
      const auto f = ring.fitness();
      out.values.insert(out.values.end(), f.begin(), f.end());
    }
  }
  return out;
}

ThresholdEstimate bs_threshold_estimate(std::span<const double> samples) {
  if (samples.size() < 1000) {
    throw ParameterError("threshold estimate needs at least 1000 samples");
  }
  ThresholdEstimate out;
  out.samples = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.moment = 2.0 * sum / static_cast<double>(samples.size()) - 1.0;
  std::vector<double> copy(samples.begin(), samples.end());
  const auto k = static_cast<std::size_t>(std::floor(0.01 * static_cast<double>(copy.size())));
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k), copy.end());
  out.quantile01 = copy[k];
  return out;
}

ThresholdEstimate bs_threshold_estimate(std::span<const double> samples, const FitnessLaw& law) {
  std::vector<double> uniform_scale(samples.size());
  std::transform(samples.begin(), samples.end(), uniform_scale.begin(),
                 [&law](double x) { return law.cdf(x); });
  ThresholdEstimate out = bs_threshold_estimate(uniform_scale);
  out.moment = law.quantile(std::clamp(out.moment, 0.0, 1.0));
  out.quantile01 = law.quantile(out.quantile01);
  return out;
}

UpperFit upper_fit(std::span<const double> samples, const FitnessLaw& law, double threshold,
                   double margin) {
  UpperFit out;
  out.cut = law.quantile(std::min(0.999, law.cdf(threshold) + margin));
  std::vector<double> above;
  for (double x : samples) {
    if (x > out.cut) above.push_back(x);
  }
  out.count = above.size();
  const double base = law.cdf(out.cut);
  out.ks = stats::ks_statistic(std::move(above),
                               [&](double x) { return (law.cdf(x) - base) / (1.0 - base); });
  return out;
}

}  // namespace evoflow::baksneppen
