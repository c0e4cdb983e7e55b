#include "cellcov/cli/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cellcov::cli {

namespace {

using nlohmann::json;

std::string format_double_json(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

double require_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw UsageError("config key '" + key + "' must be a number");
  }
  return value.get<double>();
}

std::uint64_t require_unsigned(const json& value, const std::string& key) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw UsageError("config key '" + key + "' must be a nonnegative integer");
  }
  return value.get<std::uint64_t>();
}

}  // namespace

const char* command_name(Command command) {
  switch (command) {
    case Command::ratio_cdf:
      return "ratio-cdf";
    case Command::coverage:
      return "coverage";
    case Command::generative:
      return "generative";
    case Command::validate:
      return "validate";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "ratio-cdf") return Command::ratio_cdf;
  if (name == "coverage") return Command::coverage;
  if (name == "generative") return Command::generative;
  if (name == "validate") return Command::validate;
  return std::nullopt;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<double> grid_db(const ThresholdGridDb& grid) {
  std::vector<double> values;
  values.reserve(grid.steps);
  for (int i = 0; i < grid.steps; ++i) {
    values.push_back(grid.min_db + (grid.max_db - grid.min_db) * i / (grid.steps - 1));
  }
  return values;
}

std::vector<double> grid_linear(const ThresholdGridDb& grid) {
  std::vector<double> values;
  values.reserve(grid.steps);
  for (const double db : grid_db(grid)) {
    values.push_back(db_to_linear(db));
  }
  return values;
}

void ExperimentSpec::validate() const {
  try {
    scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid scenario: ") + e.what());
  }
  if (p_list.empty()) {
    throw UsageError("p_list must not be empty");
  }
  const bool zero_allowed = command == Command::coverage;
  for (const double p : p_list) {
    if (!(p >= 0.0 && p <= 1.0) || (!zero_allowed && p == 0.0)) {
      throw UsageError("p_list values must lie in (0, 1]" +
                       std::string(zero_allowed ? " (0 permitted for coverage)" : "") +
                       ", got " + format_double_json(p));
    }
  }
  if (!(threshold_grid_db.min_db < threshold_grid_db.max_db) || threshold_grid_db.steps < 2) {
    throw UsageError("threshold_grid_db needs min < max and steps >= 2");
  }
}

std::string ExperimentSpec::resolved_output_path() const {
  if (!output_path.empty()) {
    return output_path;
  }
  if (command == Command::validate) {
    return "validation_report.txt";
  }
  std::string base = command_name(command);
  for (auto& c : base) {
    if (c == '-') c = '_';
  }
  return base + (format == OutputFormat::csv ? ".csv" : ".json");
}

std::string ExperimentSpec::resolved_config_json() const {
  json config = json::object();
  config["command"] = command_name(command);
  config["lambda"] = scenario.lambda;
  config["alpha"] = scenario.alpha;
  config["window_radius"] = scenario.resolved_window_radius();
  config["guard_fraction"] = scenario.guard_fraction;
  config["users_per_cell"] = scenario.users_per_cell;
  config["seed"] = scenario.seed;
  config["trials"] = scenario.trials;
  config["p_list"] = p_list;
  config["threshold_grid_db"] = {threshold_grid_db.min_db, threshold_grid_db.max_db,
                                 threshold_grid_db.steps};
  config["format"] = format == OutputFormat::csv ? "csv" : "json";
  return config.dump();
}

ExperimentSpec load_spec(Command command, const std::string& config_path) {
  ExperimentSpec spec;
  spec.command = command;
  spec.scenario.seed = 12345;
  if (command == Command::generative) {
    spec.scenario.trials = 400;
  }

  if (config_path.empty()) {
    return spec;
  }

  std::ifstream in(config_path);
  if (!in) {
    throw UsageError("cannot open config file '" + config_path + "'");
  }
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw UsageError("malformed config file '" + config_path + "': " + e.what());
  }
  if (!config.is_object()) {
    throw UsageError("config file must hold a JSON object");
  }

  bool p_seen = false;
  bool p_list_seen = false;
  double p_value = spec.scenario.p;

  for (const auto& [key, value] : config.items()) {
    if (key == "command") {
      if (!value.is_string() || parse_command(value.get<std::string>()) != command) {
        throw UsageError("config 'command' is '" + value.dump() + "' but the invoked command is '" +
                         command_name(command) + "'");
      }
    } else if (key == "lambda") {
      spec.scenario.lambda = require_number(value, key);
    } else if (key == "p") {
      p_value = require_number(value, key);
      p_seen = true;
    } else if (key == "alpha") {
      spec.scenario.alpha = require_number(value, key);
    } else if (key == "window_radius") {
      spec.scenario.window_radius = require_number(value, key);
    } else if (key == "guard_fraction") {
      spec.scenario.guard_fraction = require_number(value, key);
    } else if (key == "users_per_cell") {
      spec.scenario.users_per_cell = static_cast<std::uint32_t>(require_unsigned(value, key));
    } else if (key == "seed") {
      spec.scenario.seed = require_unsigned(value, key);
    } else if (key == "trials") {
      spec.scenario.trials = require_unsigned(value, key);
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(require_unsigned(value, key));
    } else if (key == "p_list") {
      if (!value.is_array() || value.empty()) {
        throw UsageError("config 'p_list' must be a nonempty array of numbers");
      }
      spec.p_list.clear();
      for (const auto& entry : value) {
        spec.p_list.push_back(require_number(entry, key));
      }
      p_list_seen = true;
    } else if (key == "threshold_grid_db") {
      if (!value.is_array() || value.size() != 3) {
        throw UsageError("config 'threshold_grid_db' must be [min_db, max_db, steps]");
      }
      spec.threshold_grid_db.min_db = require_number(value[0], key);
      spec.threshold_grid_db.max_db = require_number(value[1], key);
      spec.threshold_grid_db.steps = static_cast<int>(require_unsigned(value[2], key));
    } else if (key == "output_path") {
      if (!value.is_string()) {
        throw UsageError("config 'output_path' must be a string");
      }
      spec.output_path = value.get<std::string>();
    } else if (key == "format") {
      const std::string fmt = value.is_string() ? value.get<std::string>() : "";
      if (fmt == "csv") {
        spec.format = OutputFormat::csv;
      } else if (fmt == "json") {
        spec.format = OutputFormat::json;
      } else {
        throw UsageError("config 'format' must be \"csv\" or \"json\"");
      }
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }

  if (p_seen) {
    spec.scenario.p = p_value;
    if (!p_list_seen) {
      spec.p_list = {p_value};
    }
  }
  return spec;
}

}  // namespace cellcov::cli
