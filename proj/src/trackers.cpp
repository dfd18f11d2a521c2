#include "evoflow/trackers.hpp"

#include <cmath>
#include <span>
#include <string>

#include "evoflow/kernels.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

// ---- ExcursionLog -----------------------------------------------------------

std::uint64_t ExcursionLog::next_random() noexcept {
  rng_state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64(rng_state_);
}

void ExcursionLog::add(std::uint64_t length) {
  ++seen_;
  if (entries_.size() < cap_) {
    entries_.push_back(length);
    return;
  }
  const std::uint64_t slot = next_random() % seen_;
  if (slot < cap_) entries_[slot] = length;
}

ExcursionLog merge(const ExcursionLog& a, const ExcursionLog& b) {
  ExcursionLog out(a.cap_);
  out.seen_ = a.seen_ + b.seen_;
  out.rng_state_ = a.rng_state_ + b.rng_state_;
  if (a.entries_.size() + b.entries_.size() <= out.cap_) {
    out.entries_ = a.entries_;
    out.entries_.insert(out.entries_.end(), b.entries_.begin(), b.entries_.end());
    return out;
  }
  std::size_t ia = 0;
  std::size_t ib = 0;
  out.entries_.reserve(out.cap_);
  while (out.entries_.size() < out.cap_) {
    const bool take_a =
        ib == b.entries_.size() ||
        (ia < a.entries_.size() && out.next_random() % out.seen_ < a.seen_);
    out.entries_.push_back(take_a ? a.entries_[ia++] : b.entries_[ib++]);
  }
  return out;
}

// ---- ExcursionStats ---------------------------------------------------------

void ExcursionStats::add(std::uint64_t length) {
  ++count;
  sum += length;
  const std::size_t overflow = histogram.size() - 1;
  ++histogram[length < overflow ? length : overflow];
  log.add(length);
}

double ExcursionStats::survival(std::uint64_t m) const noexcept {
  if (count == 0) return 0.0;
  std::uint64_t longer = 0;
  for (std::size_t len = static_cast<std::size_t>(m) + 1; len < histogram.size(); ++len) {
    longer += histogram[len];
  }
  return static_cast<double>(longer) / static_cast<double>(count);
}

// ---- Trackers ---------------------------------------------------------------

Trackers::Trackers(TrackerConfig config)
    : config_(std::move(config)),
      l_current_(config_.initial_l),
      interval_births_(config_.intervals.size(), 0),
      interval_deaths_(config_.intervals.size(), 0) {
  for (const auto& iv : config_.intervals) {
    if (iv.a > iv.b) throw ParameterError("tracker interval needs a <= b");
  }
  for (ExcursionStats* s : {&g_, &e_}) {
    s->histogram.assign(config_.excursion_hist_max + 2, 0);
    s->log = ExcursionLog(config_.excursion_log_cap);
  }
  if (config_.histogram) {
    const auto& spec = *config_.histogram;
    if (spec.bins == 0 || !(spec.lo < spec.hi)) {
      throw ParameterError("tracker histogram needs bins >= 1 and lo < hi");
    }
    Histogram h;
    h.lo = spec.lo;
    h.hi = spec.hi;
    h.counts.assign(spec.bins, 0);
    for (std::size_t i = 1; i < spec.bins; ++i) histogram_edges_.push_back(h.bin_lo(i));
    histogram_ = std::move(h);
  }
}

std::size_t Trackers::histogram_bin(double x) const noexcept {
  return kernels::count_less_equal(histogram_edges_, x);
}

void Trackers::histogram_add(double x, bool remove) noexcept {
  Histogram& h = *histogram_;
  std::uint64_t* cell;
  if (x < h.lo) {
    cell = &h.underflow;
  } else if (x >= h.hi) {
    cell = &h.overflow;
  } else {
    cell = &h.counts[histogram_bin(x)];
  }
  if (remove) {
    --*cell;
  } else {
    ++*cell;
  }
}

void Trackers::observe(std::uint64_t step, const StepEvent& event, std::uint64_t l_after) {
  if (sealed_) throw UsageError("merged trackers cannot observe further steps");
  if (started_ && step != last_step_ + 1) {
    throw UsageError("observe called out of order: step " + std::to_string(step) +
                     " after " + std::to_string(last_step_));
  }
  if (l_after > l_current_ + 1 || l_after + 1 < l_current_) {
    throw UsageError("|L| may change by at most one per step");
  }
  started_ = true;
  last_step_ = step;
  ++n_;

  if (const auto* b = std::get_if<Birth>(&event)) {
    ++births_;
    for (std::size_t i = 0; i < config_.intervals.size(); ++i) {
      const auto& iv = config_.intervals[i];
      interval_births_[i] += static_cast<std::uint64_t>(iv.a < b->fitness && b->fitness < iv.b);
    }
    if (histogram_) histogram_add(b->fitness, false);
  } else if (const auto* d = std::get_if<Death>(&event)) {
    ++deaths_;
    for (std::size_t i = 0; i < config_.intervals.size(); ++i) {
      const auto& iv = config_.intervals[i];
      interval_deaths_[i] += static_cast<std::uint64_t>(iv.a < d->fitness && d->fitness < iv.b);
    }
    if (histogram_) histogram_add(d->fitness, true);
  } else {
    ++null_deaths_;
  }

  const bool was_empty = l_current_ == 0;
  ++in_progress_;
  if (was_empty && l_after > 0) {
    g_.add(in_progress_);
    in_progress_ = 0;
  } else if (!was_empty && l_after == 0) {
    e_.add(in_progress_);
    in_progress_ = 0;
    ++k_n_;
  }
  if (l_after == 0) ++t_n_;
  l_current_ = l_after;
}

bool Trackers::partition_holds() const noexcept {
  return g_.sum + e_.sum + in_progress_ == n_;
}

Trackers merge(const Trackers& a, const Trackers& b) {
  if (!(a.config_ == b.config_)) throw ParameterError("cannot merge trackers with different configurations");
  if (a.n_ == 0 && !a.sealed_) return b;
  if (b.n_ == 0 && !b.sealed_) return a;

  Trackers out(a.config_);
  out.sealed_ = true;
  out.n_ = a.n_ + b.n_;
  out.t_n_ = a.t_n_ + b.t_n_;
  out.k_n_ = a.k_n_ + b.k_n_;
  out.births_ = a.births_ + b.births_;
  out.deaths_ = a.deaths_ + b.deaths_;
  out.null_deaths_ = a.null_deaths_ + b.null_deaths_;
  out.l_current_ = 0;
  for (std::size_t i = 0; i < out.interval_births_.size(); ++i) {
    out.interval_births_[i] = a.interval_births_[i] + b.interval_births_[i];
    out.interval_deaths_[i] = a.interval_deaths_[i] + b.interval_deaths_[i];
  }
  auto merge_stats = [](ExcursionStats& dst, const ExcursionStats& x, const ExcursionStats& y) {
    dst.count = x.count + y.count;
    dst.sum = x.sum + y.sum;
    for (std::size_t i = 0; i < dst.histogram.size(); ++i) {
      dst.histogram[i] = x.histogram[i] + y.histogram[i];
    }
    dst.log = merge(x.log, y.log);
  };
  merge_stats(out.g_, a.g_, b.g_);
  merge_stats(out.e_, a.e_, b.e_);
  out.in_progress_ = a.in_progress_ + b.in_progress_;
  if (out.histogram_) {
    Histogram& h = *out.histogram_;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      h.counts[i] = a.histogram_->counts[i] + b.histogram_->counts[i];
    }
    h.underflow = a.histogram_->underflow + b.histogram_->underflow;
    h.overflow = a.histogram_->overflow + b.histogram_->overflow;
  }
  return out;
}

// ---- derived statistics ----------------------------------------------------

ExcursionSummary excursion_summary(const Trackers& trackers) {
  ExcursionSummary s;
  const auto& g = trackers.empty_stretches();
  const auto& e = trackers.busy_stretches();
  s.count = g.count;
  s.e_count = e.count;
  if (g.count > 0) s.mean_g = static_cast<double>(g.sum) / static_cast<double>(g.count);
  if (e.count > 0) s.mean_e = static_cast<double>(e.sum) / static_cast<double>(e.count);
  s.g_histogram = g.histogram;
  s.e_histogram = e.histogram;
  return s;
}

TailCheck tail_bound_check(const Trackers& trackers, const ModelParams& params, double eps) {
  if (!(eps > 0.0)) throw ParameterError("tail bound eps must be > 0");
  if (!params.supercritical()) throw ParameterError("tail bound needs p > 1/2");
  TailCheck out;
  out.eps = eps;
  const double constant = 2.0 / (params.p() * params.f_c());
  out.threshold = constant * std::pow(static_cast<double>(trackers.n()), 0.5 + eps);
  const double t = static_cast<double>(trackers.t_n());
  out.pass = t <= out.threshold;
  out.margin = out.threshold > 0.0 ? t / out.threshold : (t > 0.0 ? INFINITY : 0.0);
  return out;
}

double density_target(const ModelParams& params, const FitnessLaw& law, double a, double b) {
  if (a > b) throw ParameterError("density target needs a <= b");
  return params.p() * (law.cdf(b) - law.cdf(a));
}

Bracket death_bracket(const Trackers& trackers, std::size_t interval, std::uint64_t alive) {
  Bracket out;
  out.alive = alive;
  out.upper = trackers.interval_births(interval);
  out.lower = static_cast<std::int64_t>(out.upper) - static_cast<std::int64_t>(trackers.t_n());
  out.holds = static_cast<std::int64_t>(alive) >= out.lower && alive <= out.upper;
  return out;
}

}  // namespace evoflow
