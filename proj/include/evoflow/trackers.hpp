#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "evoflow/chain.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/fitness_law.hpp"
#include "evoflow/params.hpp"

namespace evoflow {

struct Interval {
  double a = 0.0;
  double b = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct HistogramSpec {
  std::size_t bins = 20;
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

struct TrackerConfig {
  /// Intervals (a,b) whose births and deaths are counted.
  std::vector<Interval> intervals;
  /// Running histogram of living fitnesses, if set.
  std::optional<HistogramSpec> histogram;
  /// Raw excursion lengths kept per kind before reservoir downsampling.
  std::size_t excursion_log_cap = 1'000'000;
  /// Exact length histograms cover 1..max; longer excursions land in overflow.
  std::size_t excursion_hist_max = 1024;
  /// |L| before the first observed step.
  std::uint64_t initial_l = 0;

  friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

/// Bounded sample of excursion lengths (Algorithm R reservoir, fixed seed).
class ExcursionLog {
 public:
  explicit ExcursionLog(std::size_t cap = 1'000'000) : cap_(cap) {}

  void add(std::uint64_t length);
  /// Lengths retained; all of them while seen() <= cap.
  const std::vector<std::uint64_t>& entries() const noexcept { return entries_; }
  std::uint64_t seen() const noexcept { return seen_; }
  std::size_t cap() const noexcept { return cap_; }

  /// Concatenation while the total fits the cap, otherwise a size-weighted
  /// draw from both sides.
  friend ExcursionLog merge(const ExcursionLog& a, const ExcursionLog& b);
  friend bool operator==(const ExcursionLog&, const ExcursionLog&) = default;

 private:
  std::uint64_t next_random() noexcept;

  std::size_t cap_;
  std::vector<std::uint64_t> entries_;
  std::uint64_t seen_ = 0;
  std::uint64_t rng_state_ = 0x5eed5eed5eed5eedULL;
};

/// Completed stretches of one kind (empty-L stretches G_i or nonempty-L
/// stretches E_i). Counts and sums are exact; the log may be downsampled.
struct ExcursionStats {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  /// histogram[len] for 1 <= len <= max; histogram.back() holds longer ones.
  std::vector<std::uint64_t> histogram;
  ExcursionLog log;

  void add(std::uint64_t length);
  /// Fraction of completed stretches longer than m (exact for m < max).
  double survival(std::uint64_t m) const noexcept;
  friend bool operator==(const ExcursionStats&, const ExcursionStats&) = default;
};

/// Streaming statistics of one chain, fed once per step.
///
/// Steps are classified by the pre-step state of L: a G stretch is a run of
/// steps starting from an empty L and ends with the step that makes L
/// nonempty; an E stretch starts from a nonempty L and ends with the step
/// that empties it. Together with the stretch in progress they partition the
/// observed steps. t_n counts steps after which L is empty; k_n counts
/// 1 -> 0 transitions, so k_n equals the number of completed E stretches.
class Trackers {
 public:
  explicit Trackers(TrackerConfig config = {});

  /// Throws UsageError on a step index that does not follow the previous one,
  /// on an |L| jump larger than one, or after the instance was merged.
  void observe(std::uint64_t step, const StepEvent& event, std::uint64_t l_after);

  const TrackerConfig& config() const noexcept { return config_; }
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t t_n() const noexcept { return t_n_; }
  std::uint64_t k_n() const noexcept { return k_n_; }
  std::uint64_t births() const noexcept { return births_; }
  std::uint64_t deaths() const noexcept { return deaths_; }
  std::uint64_t null_deaths() const noexcept { return null_deaths_; }
  std::uint64_t l_current() const noexcept { return l_current_; }
  std::uint64_t last_step() const noexcept { return last_step_; }

  std::uint64_t interval_births(std::size_t i) const { return interval_births_.at(i); }
  std::uint64_t interval_deaths(std::size_t i) const { return interval_deaths_.at(i); }
  std::uint64_t interval_alive(std::size_t i) const {
    return interval_births(i) - interval_deaths(i);
  }

  const ExcursionStats& empty_stretches() const noexcept { return g_; }
  const ExcursionStats& busy_stretches() const noexcept { return e_; }
  std::uint64_t in_progress() const noexcept { return in_progress_; }
  const std::optional<Histogram>& histogram() const noexcept { return histogram_; }

  /// Sum of completed G and E stretches plus the one in progress equals n.
  bool partition_holds() const noexcept;
  /// True for the result of merging two nonempty instances; it cannot observe.
  bool sealed() const noexcept { return sealed_; }

  /// Counters summed, logs concatenated. Associative with Trackers(config)
  /// as identity. Throws ParameterError on configuration mismatch.
  friend Trackers merge(const Trackers& a, const Trackers& b);
  friend bool operator==(const Trackers&, const Trackers&) = default;

 private:
  std::size_t histogram_bin(double x) const noexcept;
  void histogram_add(double x, bool remove) noexcept;

  TrackerConfig config_;
  std::uint64_t n_ = 0;
  std::uint64_t t_n_ = 0;
  std::uint64_t k_n_ = 0;
  std::uint64_t births_ = 0;
  std::uint64_t deaths_ = 0;
  std::uint64_t null_deaths_ = 0;
  std::uint64_t l_current_ = 0;
  std::uint64_t last_step_ = 0;
  bool started_ = false;
  bool sealed_ = false;
  std::vector<std::uint64_t> interval_births_;
  std::vector<std::uint64_t> interval_deaths_;
  ExcursionStats g_;
  ExcursionStats e_;
  std::uint64_t in_progress_ = 0;
  std::optional<Histogram> histogram_;
  std::vector<double> histogram_edges_;
};

Trackers merge(const Trackers& a, const Trackers& b);

struct ExcursionSummary {
  std::uint64_t count = 0;    // completed G stretches
  std::uint64_t e_count = 0;  // completed E stretches (= k_n)
  double mean_g = 0.0;
  double mean_e = 0.0;
  std::vector<std::uint64_t> g_histogram;
  std::vector<std::uint64_t> e_histogram;
};

/// Means over completed stretches only; zero when there are none.
ExcursionSummary excursion_summary(const Trackers& trackers);

struct TailCheck {
  double eps = 0.1;
  double threshold = 0.0;
  bool pass = true;
  double margin = 0.0;  // t_n / threshold
};

/// Checks t_n <= (2 / (p f_c)) * n^(1/2 + eps).
/// Throws ParameterError for eps <= 0 or p <= 1/2.
TailCheck tail_bound_check(const Trackers& trackers, const ModelParams& params,
                           double eps = 0.1);

struct DensityEstimate {
  double estimate = 0.0;
  /// False when (a,b) is not above the critical value; the limit does not apply.
  bool theorem_applies = false;
};

/// Limit of |R_n cap (a,b)| / n: p * P(a < X < b).
double density_target(const ModelParams& params, const FitnessLaw& law, double a, double b);

/// count_in(a,b) / n. Throws ParameterError when n == 0 or a > b.
template <class Source>
DensityEstimate density_estimate(const BasicChain<Source>& chain, double a, double b) {
  if (chain.n() == 0) throw ParameterError("density_estimate needs at least one step");
  DensityEstimate out;
  out.estimate = static_cast<double>(chain.count_in(a, b)) / static_cast<double>(chain.n());
  const auto vc = chain.critical();
  out.theorem_applies = vc.has_value() && a > *vc;
  return out;
}

/// births_in(a,b) - t_n <= alive <= births_in(a,b) for an interval above the
/// critical value, where alive is counted independently from the population.
struct Bracket {
  std::int64_t lower = 0;
  std::uint64_t upper = 0;
  std::uint64_t alive = 0;
  bool holds = false;
};

Bracket death_bracket(const Trackers& trackers, std::size_t interval, std::uint64_t alive);

}  // namespace evoflow
