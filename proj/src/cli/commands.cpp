#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "evoflow/baksneppen.hpp"
#include "evoflow/chain.hpp"
#include "evoflow/cli.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/oracles.hpp"
#include "evoflow/stats.hpp"
#include "evoflow/svg.hpp"
#include "evoflow/trackers.hpp"

namespace evoflow::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Failure while producing outputs (exit code 3).
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw RuntimeFailure("cannot open '" + path + "' for writing");
  return file;
}

void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  auto file = open_output(path);
  file << content;
  if (!file) throw RuntimeFailure("write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, jobs) on `threads` workers; rethrows the
/// exception of the lowest failing index.
void parallel_for(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Histogram histogram_of(std::span<const double> values, std::size_t bins, double lo, double hi) {
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  std::vector<double> edges;
  for (std::size_t i = 1; i < bins; ++i) edges.push_back(h.bin_lo(i));
  for (double x : values) {
    if (x < lo) {
      ++h.underflow;
    } else if (x >= hi) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) -
                                          edges.begin())];
    }
  }
  return h;
}

double default_hist_hi(const FitnessLaw& law) {
  return law.kind() == FitnessLaw::Kind::uniform ? 1.0 : law.quantile(0.999);
}

// ---- simulate ---------------------------------------------------------------

struct Checkpoint {
  std::uint64_t n = 0;
  std::uint64_t pop_size = 0;
  std::uint64_t l_size = 0;
  std::uint64_t t_n = 0;
  std::uint64_t k_n = 0;
  std::uint64_t births = 0;
};

struct ReplicateResult {
  explicit ReplicateResult(const TrackerConfig& config) : trackers(config) {}

  Trackers trackers;
  std::vector<Checkpoint> rows;
  std::uint64_t pop_size = 0;
  std::uint64_t l_size = 0;
  std::vector<std::uint64_t> alive_in;
  Histogram histogram;
  std::optional<double> ks_above_vc;
  std::optional<TailCheck> tail;
  std::uint64_t bracket_checks = 0;
};

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t steps, std::uint64_t every) {
  std::vector<std::uint64_t> at{0};
  if (every > 0) {
    for (std::uint64_t n = every; n < steps; n += every) at.push_back(n);
  }
  if (steps > 0) at.push_back(steps);
  return at;
}

/// KS distance of survivors above v_c against the law conditioned on (v_c, inf).
std::optional<double> ks_above(const Population& pop, const FitnessLaw& law, double vc) {
  const std::size_t m = pop.size() - pop.count_less_equal(vc);
  if (m == 0) return std::nullopt;
  const double base = law.cdf(vc);
  const double mass = 1.0 - base;
  std::size_t i = 0;
  double d = 0.0;
  pop.for_each([&](double x) {
    if (x <= vc) return;
    const double f = (law.cdf(x) - base) / mass;
    const double above = static_cast<double>(i + 1) / static_cast<double>(m) - f;
    const double below = f - static_cast<double>(i) / static_cast<double>(m);
    d = std::max({d, above, below});
    ++i;
  });
  return d;
}

ReplicateResult run_replicate(const RunConfig& c, const ModelParams& params,
                              const TrackerConfig& tracker_config, std::uint64_t index,
                              std::ostream* log) {
  auto chain = new_chain(params, c.law, replicate_seed(c.seed, index));
  ReplicateResult r(tracker_config);
  const auto vc = chain.critical();

  auto record = [&] {
    Checkpoint row;
    row.n = chain.n();
    row.pop_size = chain.population().size();
    row.l_size = chain.l_size_tracked();
    row.t_n = r.trackers.t_n();
    row.k_n = r.trackers.k_n();
    row.births = r.trackers.births();
    r.rows.push_back(row);

    if (!r.trackers.partition_holds()) throw std::logic_error("excursion partition broken");
    if (vc && chain.l_size() != chain.l_size_tracked()) {
      throw std::logic_error("tracked |L| disagrees with the population");
    }
    for (std::size_t i = 0; i < c.intervals.size(); ++i) {
      const auto& iv = c.intervals[i];
      if (!vc || !(iv.a > *vc)) continue;
      const Bracket b = death_bracket(r.trackers, i, chain.count_in(iv.a, iv.b));
      ++r.bracket_checks;
      if (!b.holds) {
        throw std::logic_error("births - t_n <= |R_n cap (a,b)| <= births violated at n=" +
                               std::to_string(chain.n()));
      }
    }
  };

  std::uint64_t done = 0;
  for (std::uint64_t target : checkpoint_schedule(c.steps, c.report_every)) {
    run(chain, target - done, r.trackers, log);
    done = target;
    record();
  }

  r.pop_size = chain.population().size();
  r.l_size = chain.l_size_tracked();
  for (const auto& iv : c.intervals) r.alive_in.push_back(chain.count_in(iv.a, iv.b));
  r.histogram = chain.snapshot_histogram(c.hist_bins, c.hist_lo.value_or(c.law.support_lo()),
                                         c.hist_hi.value_or(default_hist_hi(c.law)));
  if (vc) {
    r.ks_above_vc = ks_above(chain.population(), c.law, *vc);
    r.tail = tail_bound_check(r.trackers, params, c.eps);
  }
  return r;
}

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const ModelParams params(c.p);
  std::optional<double> vc;
  if (params.supercritical()) vc = critical_value(c.law, params);

  TrackerConfig tracker_config;
  tracker_config.intervals = c.intervals;

  std::ofstream log_file;
  if (!c.event_log_path.empty()) {
    log_file = open_output(c.event_log_path);
    log_file << "n,event_type,fitness\n";
  }

  std::vector<std::optional<ReplicateResult>> results(c.replicates);
  parallel_for(c.replicates, worker_count(c.threads, c.replicates), [&](std::size_t i) {
    std::ostream* log = (i == 0 && log_file.is_open()) ? &log_file : nullptr;
    results[i] = run_replicate(c, params, tracker_config, i, log);
  });

  // Aggregate in replicate order.
  Trackers merged(tracker_config);
  std::vector<Checkpoint> rows = results[0]->rows;
  for (auto& row : rows) row = Checkpoint{row.n};
  std::uint64_t pop_size = 0;
  std::uint64_t l_size = 0;
  std::uint64_t bracket_checks = 0;
  std::vector<std::uint64_t> alive(c.intervals.size(), 0);
  Histogram hist = results[0]->histogram;
  std::fill(hist.counts.begin(), hist.counts.end(), 0);
  hist.underflow = hist.overflow = 0;
  double ks_sum = 0.0;
  std::size_t ks_count = 0;
  std::optional<TailCheck> tail;
  for (const auto& opt : results) {
    const ReplicateResult& r = *opt;
    merged = merge(merged, r.trackers);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      rows[j].pop_size += r.rows[j].pop_size;
      rows[j].l_size += r.rows[j].l_size;
      rows[j].t_n += r.rows[j].t_n;
      rows[j].k_n += r.rows[j].k_n;
      rows[j].births += r.rows[j].births;
    }
    pop_size += r.pop_size;
    l_size += r.l_size;
    bracket_checks += r.bracket_checks;
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] += r.alive_in[i];
    for (std::size_t b = 0; b < hist.counts.size(); ++b) hist.counts[b] += r.histogram.counts[b];
    hist.underflow += r.histogram.underflow;
    hist.overflow += r.histogram.overflow;
    if (r.ks_above_vc) {
      ks_sum += *r.ks_above_vc;
      ++ks_count;
    }
    if (r.tail) {
      if (!tail) {
        tail = r.tail;
      } else {
        tail->pass = tail->pass && r.tail->pass;
        tail->margin = std::max(tail->margin, r.tail->margin);
      }
    }
  }

  const double total_steps = static_cast<double>(c.steps) * static_cast<double>(c.replicates);

  Json j;
  j["p"] = c.p;
  j["f_c"] = params.f_c();
  j["v_c"] = nullable(vc);
  j["law"] = c.law.label();
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  j["replicates"] = c.replicates;
  j["pop_size"] = pop_size;
  j["l_size"] = l_size;
  j["t_n"] = merged.t_n();
  j["k_n"] = merged.k_n();
  j["N_n"] = merged.births();
  j["deaths"] = merged.deaths();
  j["null_deaths"] = merged.null_deaths();
  if (tail) {
    j["tail_check"] = {{"eps", tail->eps},
                       {"threshold", tail->threshold},
                       {"pass", tail->pass},
                       {"margin", tail->margin}};
  } else {
    j["tail_check"] = nullptr;
  }
  Json densities = Json::array();
  for (std::size_t i = 0; i < c.intervals.size(); ++i) {
    const auto& iv = c.intervals[i];
    densities.push_back({{"a", iv.a},
                         {"b", iv.b},
                         {"estimate", total_steps > 0 ? static_cast<double>(alive[i]) / total_steps : 0.0},
                         {"target", density_target(params, c.law, iv.a, iv.b)},
                         {"theorem_applies", vc.has_value() && iv.a > *vc}});
  }
  j["densities"] = densities;
  const ExcursionSummary ex = excursion_summary(merged);
  j["excursions"] = {{"count", ex.count},
                     {"e_count", ex.e_count},
                     {"mean_G", ex.mean_g},
                     {"mean_E", ex.mean_e}};
  j["ks_above_vc"] = ks_count > 0 ? Json(ks_sum / static_cast<double>(ks_count)) : Json(nullptr);
  j["fraction_below_vc"] =
      vc && pop_size > 0 ? Json(static_cast<double>(l_size) / static_cast<double>(pop_size))
                         : Json(nullptr);
  j["bracket_checks"] = bracket_checks;

  if (!c.csv_path.empty()) {
    std::ostringstream csv;
    csv << "n,pop_size,l_size,t_n,k_n,N_n\n";
    for (const auto& row : rows) {
      csv << row.n << ',' << row.pop_size << ',' << row.l_size << ',' << row.t_n << ','
          << row.k_n << ',' << row.births << '\n';
    }
    emit(c.csv_path, csv.str(), out);
  }
  if (!c.hist_csv_path.empty()) {
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count,density\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
      const double width = hist.bin_hi(b) - hist.bin_lo(b);
      const double density =
          total_steps > 0 ? static_cast<double>(hist.counts[b]) / (total_steps * width) : 0.0;
      csv << format_double(hist.bin_lo(b)) << ',' << format_double(hist.bin_hi(b)) << ','
          << hist.counts[b] << ',' << format_double(density) << '\n';
    }
    emit(c.hist_csv_path, csv.str(), out);
  }
  if (!c.svg_path.empty()) {
    svg::BarChartStyle style;
    style.title = "surviving fitnesses, p=" + format_double(c.p) + ", " + c.law.label() +
                  ", n=" + std::to_string(c.steps);
    style.marker = vc;
    style.marker_label = c.law.kind() == FitnessLaw::Kind::uniform ? "f_c" : "v_c";
    emit(c.svg_path, svg::histogram_svg(hist, style), out);
  }
  emit(c.json_path, dump(j), out);
  if (log_file.is_open() && !log_file) throw RuntimeFailure("event log write failed");
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

namespace {

struct NoObserver {
  void observe(std::uint64_t, const StepEvent&, std::uint64_t) noexcept {}
};

}  // namespace

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  std::vector<double> grid = c.p_grid;
  if (grid.empty()) grid = {0.55, 0.65, 0.75, 0.85, 0.95};
  std::vector<Interval> intervals = c.intervals;
  if (intervals.empty()) intervals = {{0.6, 0.8}};
  for (double p : grid) {
    if (!(p > 0.5 && p < 1.0)) throw ConfigError("sweep values of p must lie in (1/2,1)");
  }

  std::vector<std::vector<std::uint64_t>> alive(grid.size());
  parallel_for(grid.size(), worker_count(c.threads, grid.size()), [&](std::size_t i) {
    auto chain = new_chain(ModelParams(grid[i]), c.law, replicate_seed(c.seed, i));
    NoObserver none;
    run(chain, c.steps, none);
    for (const auto& iv : intervals) alive[i].push_back(chain.count_in(iv.a, iv.b));
  });

  std::ostringstream csv;
  csv << "p,f_c,v_c,a,b,estimate,target,theorem_applies\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ModelParams params(grid[i]);
    const double vc = critical_value(c.law, params);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const auto& iv = intervals[k];
      const double estimate =
          c.steps > 0 ? static_cast<double>(alive[i][k]) / static_cast<double>(c.steps) : 0.0;
      csv << format_double(grid[i]) << ',' << format_double(params.f_c()) << ','
          << format_double(vc) << ',' << format_double(iv.a) << ',' << format_double(iv.b) << ','
          << format_double(estimate) << ','
          << format_double(density_target(params, c.law, iv.a, iv.b)) << ','
          << (iv.a > vc ? 1 : 0) << '\n';
    }
  }
  emit(c.csv_path, csv.str(), out);
  return kExitOk;
}

// ---- oracle -----------------------------------------------------------------

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  constexpr std::uint64_t kMaxSrw = 200'000;
  constexpr std::uint64_t kMaxLpmf = 1'000'000;
  std::ostringstream csv;
  csv << "k,probability\n";
  auto row = [&csv](std::uint64_t k, double prob) {
    csv << k << ',' << format_double(prob) << '\n';
  };
  switch (c.oracle) {
    case OracleKind::lpmf: {
      if (c.n > kMaxLpmf) throw ResourceError("oracle lpmf supports n <= 1000000");
      const std::uint64_t cap = c.cap.value_or(c.n);
      const auto pmf = oracles::exact_l_pmf(ModelParams(c.p), c.n, cap);
      for (std::size_t k = 0; k < pmf.probabilities.size(); ++k) row(k, pmf.probabilities[k]);
      break;
    }
    case OracleKind::srw: {
      if (c.n > kMaxSrw) throw ResourceError("oracle srw supports n <= 200000");
      const auto table = oracles::srw_survival_table(c.n);
      if (c.all) {
        for (std::size_t k = 0; k < table.size(); ++k) row(k, table[k]);
      } else {
        row(c.n, table.back());
      }
      break;
    }
    case OracleKind::binomial:
      if (c.k) {
        row(*c.k, oracles::binomial_pmf(c.n, c.p, *c.k));
      } else {
        for (std::uint64_t k = 0; k <= c.n; ++k) row(k, oracles::binomial_pmf(c.n, c.p, k));
      }
      break;
    case OracleKind::geometric:
      if (c.k) {
        row(*c.k, oracles::geometric_pmf(c.success, *c.k));
      } else {
        for (std::uint64_t k = 1; k <= c.n; ++k) row(k, oracles::geometric_pmf(c.success, k));
      }
      break;
  }
  emit(c.csv_path, csv.str(), out);
  return kExitOk;
}

// ---- bs ---------------------------------------------------------------------

int cmd_bs(const RunConfig& c, std::ostream& out) {
  baksneppen::Ring ring(c.sites, c.law, c.seed);
  const auto samples = baksneppen::bs_run(ring, c.steps, c.burn_in, c.sample_every);

  Json j;
  j["sites"] = c.sites;
  j["steps"] = c.steps;
  j["burn_in"] = c.burn_in;
  j["sample_every"] = c.sample_every;
  j["law"] = c.law.label();
  j["seed"] = c.seed;
  j["snapshots"] = samples.snapshots();
  j["samples"] = samples.values.size();

  std::optional<double> marker;
  if (samples.values.size() >= 1000) {
    const auto est = baksneppen::bs_threshold_estimate(samples.values, c.law);
    j["f_star_moment"] = est.moment;
    j["f_star_quantile01"] = est.quantile01;
    const auto fit = baksneppen::upper_fit(samples.values, c.law, est.moment);
    j["ks_cut"] = fit.cut;
    j["ks_above"] = fit.count == 0 ? Json(nullptr) : Json(fit.ks);
    marker = est.moment;
  } else {
    j["f_star_moment"] = nullptr;
    j["f_star_quantile01"] = nullptr;
    j["ks_cut"] = nullptr;
    j["ks_above"] = nullptr;
  }

  if (!c.csv_path.empty()) {
    std::ofstream file = open_output(c.csv_path);
    file << "update,site,fitness\n";
    for (std::size_t s = 0; s < samples.snapshots(); ++s) {
      for (std::size_t site = 0; site < samples.sites; ++site) {
        file << samples.taken_at[s] << ',' << site << ','
             << format_double(samples.values[s * samples.sites + site]) << '\n';
      }
    }
    if (!file) throw RuntimeFailure("write to '" + c.csv_path + "' failed");
  }
  if (!c.svg_path.empty()) {
    svg::BarChartStyle style;
    style.title = "Bak-Sneppen fitness profile, N=" + std::to_string(c.sites) + ", " + c.law.label();
    style.marker = marker;
    style.marker_label = "f*";
    const Histogram h =
        histogram_of(samples.values, c.hist_bins, c.law.support_lo(), default_hist_hi(c.law));
    emit(c.svg_path, svg::histogram_svg(h, style), out);
  }
  emit(c.json_path, dump(j), out);
  return kExitOk;
}

// ---- front end --------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_config(args);
    validate(config);
    switch (config.command) {
      case Command::simulate:
        return cmd_simulate(config, out);
      case Command::sweep:
        return cmd_sweep(config, out);
      case Command::oracle:
        return cmd_oracle(config, out);
      case Command::bs:
        return cmd_bs(config, out);
    }
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "evoflow: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "evoflow: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "evoflow: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

std::string summary_schema_path() { return std::string(EVOFLOW_SCHEMA_DIR) + "/summary.schema.json"; }

}  // namespace evoflow::cli
