#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cellcov/montecarlo.hpp"

namespace cellcov::cli {

/// Bad command line or config file; the tool exits with code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

enum class Command { ratio_cdf, coverage, generative, validate };
enum class OutputFormat { csv, json };

const char* command_name(Command command);
std::optional<Command> parse_command(std::string_view name);

struct ThresholdGridDb {
  double min_db = -10.0;
  double max_db = 20.0;
  int steps = 31;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Ascending linear thresholds of the dB grid.
std::vector<double> grid_linear(const ThresholdGridDb& grid);
std::vector<double> grid_db(const ThresholdGridDb& grid);

/// A fully resolved experiment: command, scenario, and output options.
/// Field values come from defaults, then the JSON config file, then command
/// line flags, in that order.
struct ExperimentSpec {
  Command command = Command::ratio_cdf;
  mc::ScenarioConfig scenario;
  std::vector<double> p_list{0.3, 0.5, 0.7, 1.0};
  ThresholdGridDb threshold_grid_db;
  std::string output_path;  // empty selects the per-command default
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 0;
  bool quick = false;

  /// Cross-field checks on top of scenario.validate(); throws UsageError.
  void validate() const;

  std::string resolved_output_path() const;

  /// The resolved configuration as a flat JSON object (single line,
  /// deterministic key order). Embedded in every output header; feeding it
  /// back through --config reproduces the run.
  std::string resolved_config_json() const;
};

/// Builds a spec for `command`, merging in the JSON config file when
/// `config_path` is nonempty. Throws UsageError on malformed or unknown keys.
ExperimentSpec load_spec(Command command, const std::string& config_path);

}  // namespace cellcov::cli
