#include <CLI11.hpp>

#include <charconv>
#include <cmath>

#include "evoflow/cli.hpp"
#include "evoflow/errors.hpp"

namespace evoflow::cli {

namespace {

double parse_real(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return value;
}

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("--interval expects a,b; got '" + text + "'");
  Interval iv{parse_real(text.substr(0, comma), "--interval"),
              parse_real(text.substr(comma + 1), "--interval")};
  return iv;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_probability(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

FitnessLaw parse_law(const std::string& text) {
  try {
    return FitnessLaw::parse(text);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

// Raw option storage bound to CLI11 before conversion into RunConfig.
struct Raw {
  std::string p = "2/3";
  std::string law = "uniform";
  std::vector<std::string> intervals;
  std::string p_grid;
  std::string success = "0.5";
  std::optional<double> hist_lo;
  std::optional<double> hist_hi;
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> k;
};

void add_outputs(CLI::App* sub, RunConfig& c, bool json, bool svg) {
  sub->add_option("--csv", c.csv_path, "CSV output path (stdout if omitted)");
  if (json) sub->add_option("--json", c.json_path, "JSON summary path (stdout if omitted)");
  if (svg) sub->add_option("--svg", c.svg_path, "SVG histogram path");
}

}  // namespace

double parse_probability(const std::string& text) {
  double value = 0.0;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const double num = parse_real(text.substr(0, slash), "probability numerator");
    const double den = parse_real(text.substr(slash + 1), "probability denominator");
    if (den == 0.0) throw ConfigError("probability '" + text + "' has a zero denominator");
    value = num / den;
  } else {
    value = parse_real(text, "probability");
  }
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError("probability must lie in (0,1), got '" + text + "'");
  }
  return value;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  Raw raw;
  CLI::App app{"Kill-the-least-fit evolution model: simulation and exact references", "evoflow"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run independent chains and summarise them");
  sim->add_option("--p", raw.p, "Birth probability (decimal or a/b)");
  sim->add_option("--law", raw.law, "Fitness law: uniform | exp:<rate> | pareto:<alpha>");
  sim->add_option("--steps", c.steps, "Steps per replicate");
  sim->add_option("--seed", c.seed, "Master seed");
  sim->add_option("--replicates", c.replicates, "Independent chains");
  sim->add_option("--report-every", c.report_every, "Timeseries cadence (0: first/last only)");
  sim->add_option("--interval", raw.intervals, "Density interval a,b (repeatable)");
  sim->add_option("--hist-bins", c.hist_bins, "Histogram bins");
  sim->add_option("--hist-lo", raw.hist_lo, "Histogram lower edge");
  sim->add_option("--hist-hi", raw.hist_hi, "Histogram upper edge");
  sim->add_option("--eps", c.eps, "Exponent slack of the t_n tail check");
  sim->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  add_outputs(sim, c, true, true);
  sim->add_option("--hist-csv", c.hist_csv_path, "Histogram CSV path");
  sim->add_option("--event-log", c.event_log_path, "Per-step event log of replicate 0");

  auto* sweep = app.add_subcommand("sweep", "Density estimates across a grid of p");
  sweep->add_option("--p-grid", raw.p_grid, "Comma-separated birth probabilities in (1/2,1)");
  sweep->add_option("--law", raw.law, "Fitness law");
  sweep->add_option("--steps", c.steps, "Steps per p value");
  sweep->add_option("--seed", c.seed, "Master seed");
  sweep->add_option("--interval", raw.intervals, "Density interval a,b (repeatable)");
  sweep->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  add_outputs(sweep, c, false, false);

  auto* oracle = app.add_subcommand("oracle", "Exact reference distributions as CSV");
  oracle->require_subcommand(1);
  add_outputs(oracle, c, false, false);
  auto* lpmf = oracle->add_subcommand("lpmf", "Law of |L_n| started from 0");
  lpmf->add_option("--p", raw.p, "Birth probability in (1/2,1)");
  lpmf->add_option("--n", c.n, "Steps");
  lpmf->add_option("--cap", raw.cap, "Truncation level (default n)");
  auto* srw = oracle->add_subcommand("srw", "P_1(T_0 > n) for the simple symmetric walk");
  srw->add_option("--n", c.n, "Horizon");
  srw->add_flag("--all", c.all, "Emit every k = 0..n");
  auto* binom = oracle->add_subcommand("binomial", "Binomial(n,p) pmf");
  binom->add_option("--n", c.n, "Trials");
  binom->add_option("--p", raw.p, "Success probability");
  binom->add_option("--k", raw.k, "Single value (default: all k)");
  auto* geom = oracle->add_subcommand("geometric", "Geometric pmf on {1,2,...}");
  geom->add_option("--success", raw.success, "Success probability in (0,1] (decimal or a/b)");
  geom->add_option("--k", raw.k, "Single value (default: 1..n)");
  geom->add_option("--n", c.n, "Largest k when --k is omitted");
  for (auto* sub : {lpmf, srw, binom, geom}) sub->fallthrough();

  auto* bs = app.add_subcommand("bs", "Bak-Sneppen ring for comparison");
  bs->add_option("--sites", c.sites, "Ring size (>= 3)");
  bs->add_option("--steps", c.steps, "Total updates");
  bs->add_option("--burn-in", c.burn_in, "Updates before sampling starts");
  bs->add_option("--sample-every", c.sample_every, "Sampling cadence in updates");
  bs->add_option("--law", raw.law, "Fitness law");
  bs->add_option("--seed", c.seed, "Seed");
  bs->add_option("--hist-bins", c.hist_bins, "Histogram bins");
  add_outputs(bs, c, true, true);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("evoflow");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (sim->parsed()) c.command = Command::simulate;
  if (sweep->parsed()) c.command = Command::sweep;
  if (oracle->parsed()) {
    c.command = Command::oracle;
    if (lpmf->parsed()) c.oracle = OracleKind::lpmf;
    if (srw->parsed()) c.oracle = OracleKind::srw;
    if (binom->parsed()) c.oracle = OracleKind::binomial;
    if (geom->parsed()) c.oracle = OracleKind::geometric;
  }
  if (bs->parsed()) c.command = Command::bs;

  if (c.command == Command::oracle && c.oracle == OracleKind::binomial) {
    // Binomial accepts the endpoints 0 and 1.
    const double v = raw.p.find('/') == std::string::npos ? parse_real(raw.p, "--p") : -1.0;
    c.p = (v == 0.0 || v == 1.0) ? v : parse_probability(raw.p);
  } else {
    c.p = parse_probability(raw.p);
  }
  c.success = raw.success == "1" ? 1.0 : parse_probability(raw.success);
  c.law = parse_law(raw.law);
  for (const auto& text : raw.intervals) c.intervals.push_back(parse_interval(text));
  if (!raw.p_grid.empty()) c.p_grid = parse_grid(raw.p_grid);
  c.hist_lo = raw.hist_lo;
  c.hist_hi = raw.hist_hi;
  c.cap = raw.cap;
  c.k = raw.k;
  return c;
}

std::vector<std::string> format_config(const RunConfig& c) {
  std::vector<std::string> a;
  auto flag = [&a](const char* name, const std::string& value) {
    a.emplace_back(name);
    a.push_back(value);
  };
  auto num = [](auto v) { return std::to_string(v); };
  auto outputs = [&](bool json, bool svg) {
    if (!c.csv_path.empty()) flag("--csv", c.csv_path);
    if (json && !c.json_path.empty()) flag("--json", c.json_path);
    if (svg && !c.svg_path.empty()) flag("--svg", c.svg_path);
  };
  auto intervals = [&] {
    for (const auto& iv : c.intervals) {
      flag("--interval", format_double(iv.a) + "," + format_double(iv.b));
    }
  };

  switch (c.command) {
    case Command::simulate:
      a.emplace_back("simulate");
      flag("--p", format_double(c.p));
      flag("--law", c.law.label());
      flag("--steps", num(c.steps));
      flag("--seed", num(c.seed));
      flag("--replicates", num(c.replicates));
      flag("--report-every", num(c.report_every));
      intervals();
      flag("--hist-bins", num(c.hist_bins));
      if (c.hist_lo) flag("--hist-lo", format_double(*c.hist_lo));
      if (c.hist_hi) flag("--hist-hi", format_double(*c.hist_hi));
      flag("--eps", format_double(c.eps));
      flag("--threads", num(c.threads));
      outputs(true, true);
      if (!c.hist_csv_path.empty()) flag("--hist-csv", c.hist_csv_path);
      if (!c.event_log_path.empty()) flag("--event-log", c.event_log_path);
      break;
    case Command::sweep: {
      a.emplace_back("sweep");
      std::string grid;
      for (std::size_t i = 0; i < c.p_grid.size(); ++i) {
        if (i) grid += ',';
        grid += format_double(c.p_grid[i]);
      }
      if (!grid.empty()) flag("--p-grid", grid);
      flag("--law", c.law.label());
      flag("--steps", num(c.steps));
      flag("--seed", num(c.seed));
      intervals();
      flag("--threads", num(c.threads));
      outputs(false, false);
      break;
    }
    case Command::oracle:
      a.emplace_back("oracle");
      outputs(false, false);
      switch (c.oracle) {
        case OracleKind::lpmf:
          a.emplace_back("lpmf");
          flag("--p", format_double(c.p));
          flag("--n", num(c.n));
          if (c.cap) flag("--cap", num(*c.cap));
          break;
        case OracleKind::srw:
          a.emplace_back("srw");
          flag("--n", num(c.n));
          if (c.all) a.emplace_back("--all");
          break;
        case OracleKind::binomial:
          a.emplace_back("binomial");
          flag("--n", num(c.n));
          flag("--p", format_double(c.p));
          if (c.k) flag("--k", num(*c.k));
          break;
        case OracleKind::geometric:
          a.emplace_back("geometric");
          flag("--success", format_double(c.success));
          if (c.k) flag("--k", num(*c.k));
          flag("--n", num(c.n));
          break;
      }
      break;
    case Command::bs:
      a.emplace_back("bs");
      flag("--sites", num(c.sites));
      flag("--steps", num(c.steps));
      flag("--burn-in", num(c.burn_in));
      flag("--sample-every", num(c.sample_every));
      flag("--law", c.law.label());
      flag("--seed", num(c.seed));
      flag("--hist-bins", num(c.hist_bins));
      outputs(true, true);
      break;
  }
  return a;
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  for (const auto& iv : c.intervals) {
    require(iv.a <= iv.b, "--interval needs a <= b");
  }
  switch (c.command) {
    case Command::simulate:
      require(c.replicates >= 1, "--replicates must be >= 1");
      require(c.hist_bins >= 1, "--hist-bins must be >= 1");
      require(c.eps > 0.0, "--eps must be > 0");
      if (c.hist_lo && c.hist_hi) require(*c.hist_lo < *c.hist_hi, "--hist-lo must be < --hist-hi");
      break;
    case Command::sweep:
      for (double p : c.p_grid) {
        require(p > 0.5 && p < 1.0, "sweep values of p must lie in (1/2,1); got " + format_double(p));
      }
      break;
    case Command::oracle:
      switch (c.oracle) {
        case OracleKind::lpmf:
          require(c.p > 0.5, "oracle lpmf needs p in (1/2,1)");
          break;
        case OracleKind::srw:
          break;
        case OracleKind::binomial:
          require(c.p >= 0.0 && c.p <= 1.0, "binomial p must lie in [0,1]");
          if (c.k) require(*c.k <= c.n, "binomial --k must satisfy k <= n");
          break;
        case OracleKind::geometric:
          require(c.success > 0.0 && c.success <= 1.0, "--success must lie in (0,1]");
          if (c.k) require(*c.k >= 1, "geometric --k must be >= 1");
          break;
      }
      break;
    case Command::bs:
      require(c.sites >= 3, "--sites must be >= 3");
      require(c.steps >= c.burn_in, "--steps must be >= --burn-in");
      require(c.sample_every >= 1, "--sample-every must be >= 1");
      require(c.hist_bins >= 1, "--hist-bins must be >= 1");
      break;
  }
}

}  // namespace evoflow::cli
