#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoflow/fitness_law.hpp"
#include "evoflow/trackers.hpp"

namespace evoflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Invalid command line or option combination (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// --help was given; what() holds the help text (exit code 0).
class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(const std::string& text) : std::runtime_error(text) {}
};

enum class Command { simulate, sweep, oracle, bs };
enum class OracleKind { lpmf, srw, binomial, geometric };

struct RunConfig {
  Command command = Command::simulate;

  // model
  double p = 2.0 / 3.0;
  FitnessLaw law = FitnessLaw::uniform();
  std::uint64_t steps = 100'000;
  std::uint64_t seed = 1;

  // simulate / sweep
  std::uint64_t replicates = 1;
  std::uint64_t report_every = 0;  // 0: first and last rows only
  std::vector<Interval> intervals;
  std::size_t hist_bins = 20;
  std::optional<double> hist_lo;
  std::optional<double> hist_hi;
  double eps = 0.1;
  std::vector<double> p_grid;  // sweep
  unsigned threads = 0;        // 0: hardware concurrency

  // oracle
  OracleKind oracle = OracleKind::lpmf;
  std::uint64_t n = 10;
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> k;
  double success = 0.5;
  bool all = false;

  // bs
  std::size_t sites = 128;
  std::uint64_t burn_in = 0;
  std::uint64_t sample_every = 1;

  // outputs
  std::string csv_path;
  std::string json_path;
  std::string svg_path;
  std::string hist_csv_path;
  std::string event_log_path;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses `args` (without the program name). Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);
/// Textual form accepted by parse_config; parse_config(format_config(c)) == c.
std::vector<std::string> format_config(const RunConfig& config);
/// Rejects invalid combinations before any work starts. Throws ConfigError.
void validate(const RunConfig& config);

/// Parses a probability written as a decimal or a fraction literal "a/b".
double parse_probability(const std::string& text);

/// Output text of each command is written to the configured paths; anything
/// without a path goes to `out`. Returns the process exit code.
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_oracle(const RunConfig& config, std::ostream& out);
int cmd_bs(const RunConfig& config, std::ostream& out);

/// Full front end: parse, validate, dispatch, map errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Path of the shipped JSON schema for the simulate summary.
std::string summary_schema_path();

}  // namespace evoflow::cli
