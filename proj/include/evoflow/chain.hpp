#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string_view>
#include <variant>
#include <vector>

#include "evoflow/errors.hpp"
#include "evoflow/fitness_law.hpp"
#include "evoflow/params.hpp"
#include "evoflow/population.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

struct Birth {
  double fitness;
  friend bool operator==(const Birth&, const Birth&) = default;
};
struct Death {
  double fitness;
  friend bool operator==(const Death&, const Death&) = default;
};
/// Death drawn while the population was empty: nothing happens.
struct NullDeath {
  friend bool operator==(const NullDeath&, const NullDeath&) = default;
};

using StepEvent = std::variant<Birth, Death, NullDeath>;

std::string_view event_name(const StepEvent& event) noexcept;
/// Writes one `n,event_type,fitness` record (fitness empty for null deaths).
void write_event_record(std::ostream& out, std::uint64_t n, const StepEvent& event);

/// Equal-width histogram over [lo,hi) with out-of-range tallies.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  double bin_lo(std::size_t i) const noexcept {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
  }
  double bin_hi(std::size_t i) const noexcept { return bin_lo(i + 1); }
  std::uint64_t total() const noexcept;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// State of the kill-the-least-fit process.
///
/// Each step draws one uniform for the event coin: below p is a birth, whose
/// fitness is the law's quantile of a second draw; otherwise the least fit
/// species dies (nothing happens if there is none). The number of living
/// species below the critical value is maintained incrementally when p > 1/2.
template <class Source>
class BasicChain {
 public:
  BasicChain(const ModelParams& params, const FitnessLaw& law, Source source)
      : params_(params), law_(law), source_(std::move(source)) {
    if (params_.supercritical()) critical_ = critical_value(law_, params_);
  }

  std::uint64_t n() const noexcept { return n_; }
  const ModelParams& params() const noexcept { return params_; }
  const FitnessLaw& law() const noexcept { return law_; }
  const Population& population() const noexcept { return population_; }
  Source& source() noexcept { return source_; }
  std::optional<double> critical() const noexcept { return critical_; }

  StepEvent step() {
    ++n_;
    if (source_.uniform() < params_.p()) {
      const double fitness = law_.sample(source_);
      population_.insert(fitness);
      if (fitness < critical_or_inf()) ++below_;
      return Birth{fitness};
    }
    if (population_.empty()) return NullDeath{};
    const double fitness = population_.remove_min();
    if (fitness < critical_or_inf()) --below_;
    return Death{fitness};
  }

  /// Living species strictly inside (a,b). Throws ParameterError if a > b.
  std::size_t count_in(double a, double b) const { return population_.count_in(a, b); }

  /// |L_n|: living species strictly below the critical value, recomputed from
  /// the tree. Throws ParameterError when p <= 1/2.
  std::size_t l_size() const {
    if (!critical_) throw ParameterError("l_size needs p > 1/2");
    return population_.count_less(*critical_);
  }

  /// |L_n| as maintained step by step (0 when p <= 1/2). Equals l_size().
  std::size_t l_size_tracked() const noexcept { return below_; }

  Histogram snapshot_histogram(std::size_t bins, double lo, double hi) const {
    if (bins == 0) throw ParameterError("histogram needs at least one bin");
    if (!(lo < hi)) throw ParameterError("histogram needs lo < hi");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.resize(bins);
    h.underflow = population_.count_less(lo);
    std::uint64_t below_edge = h.underflow;
    for (std::size_t i = 0; i < bins; ++i) {
      const std::uint64_t below_next = population_.count_less(h.bin_hi(i));
      h.counts[i] = below_next - below_edge;
      below_edge = below_next;
    }
    h.overflow = population_.size() - below_edge;
    return h;
  }

  friend bool operator==(const BasicChain&, const BasicChain&) = default;

 private:
  double critical_or_inf() const noexcept {
    return critical_ ? *critical_ : -std::numeric_limits<double>::infinity();
  }

  ModelParams params_;
  FitnessLaw law_;
  Source source_;
  Population population_;
  std::optional<double> critical_;
  std::uint64_t n_ = 0;
  std::size_t below_ = 0;
};

using Chain = BasicChain<Mt64Uniform>;

/// Fresh chain at n = 0 with an empty population.
inline Chain new_chain(const ModelParams& params, const FitnessLaw& law, std::uint64_t seed) {
  return Chain(params, law, Mt64Uniform(seed));
}

/// Advances `chain` by `steps` events, feeding every event to `observer`
/// as observer.observe(n, event, l_size_after). When `log` is set each event
/// is also written as an `n,event_type,fitness` record.
template <class Source, class Observer>
void run(BasicChain<Source>& chain, std::uint64_t steps, Observer& observer,
         std::ostream* log = nullptr) {
  for (std::uint64_t i = 0; i < steps; ++i) {
    const StepEvent event = chain.step();
    observer.observe(chain.n(), event, chain.l_size_tracked());
    if (log) write_event_record(*log, chain.n(), event);
  }
}

}  // namespace evoflow
