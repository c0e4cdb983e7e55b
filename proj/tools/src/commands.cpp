#include "cellcov/cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cellcov/analytic.hpp"
#include "cellcov/stats.hpp"
#include "cellcov/version.hpp"

namespace cellcov::cli {

namespace {

// Shortest round-trip decimal form, locale independent.
std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_table(const Table& table, const std::vector<std::string>& comments,
                         OutputFormat format) {
  std::string out;
  for (const auto& comment : comments) {
    out += "# " + comment + "\n";
  }
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out += ',';
      out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out += ',';
        out += num(row[c]);
      }
      out += '\n';
    }
  } else {
    out += "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out += "  {";
      for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
        if (c > 0) out += ", ";
        out += "\"" + table.columns[c] + "\": " + num(table.rows[r][c]);
      }
      out += r + 1 < table.rows.size() ? "},\n" : "}\n";
    }
    out += "]\n";
  }
  return out;
}

std::vector<std::string> base_comments(const ExperimentSpec& spec) {
  return {
      std::string("cellcov ") + std::string(kVersion),
      std::string("command: ") + command_name(spec.command),
      "config: " + spec.resolved_config_json(),
  };
}

mc::ScenarioConfig scenario_at_p(const ExperimentSpec& spec, double p) {
  mc::ScenarioConfig cfg = spec.scenario;
  cfg.p = p;
  return cfg;
}

void print_warnings(const ExperimentSpec& spec) {
  for (const auto& warning : spec.scenario.validate()) {
    std::cerr << "warning: " << warning << "\n";
  }
}

}  // namespace

std::string render_ratio_cdf(const ExperimentSpec& spec) {
  Table table;
  table.columns = {"p", "r", "analytic_cdf", "empirical_cdf", "ks_distance"};
  auto comments = base_comments(spec);

  for (const double p : spec.p_list) {
    const auto dist = mc::estimate_ratio_distribution(scenario_at_p(spec, p), spec.threads);
    const analytic::ThinningProbability tp(p);
    const double ks =
        stats::ks_distance(dist, [&](double r) { return analytic::ratio_cdf(r, tp); });
    comments.push_back("p=" + num(p) + ": trials=" + std::to_string(dist.size()) +
                       " redraws=" + std::to_string(dist.metadata().redraw_count) +
                       " ks=" + num(ks));
    for (int i = 0; i < 200; ++i) {
      const double r = 1.0 + 5.0 * i / 199.0;  // [1, 6]
      table.rows.push_back({p, r, analytic::ratio_cdf(r, tp), dist.ecdf(r), ks});
    }
  }
  return render_table(table, comments, spec.format);
}

std::string render_coverage(const ExperimentSpec& spec) {
  Table table;
  table.columns = {"p",            "t_db",  "t_linear", "analytic_pc",
                   "empirical_pc", "ci_lo", "ci_hi"};
  const auto comments = base_comments(spec);
  const auto t_db = grid_db(spec.threshold_grid_db);
  const auto t_linear = grid_linear(spec.threshold_grid_db);

  for (const double p : spec.p_list) {
    std::vector<double> analytic_pc(t_linear.size());
    for (std::size_t j = 0; j < t_linear.size(); ++j) {
      analytic_pc[j] = analytic::coverage_probability(spec.scenario.alpha, t_linear[j], p);
    }
    if (spec.scenario.alpha == 4.0) {
      // two independent routes to the same value, cross-checked before writing
      for (std::size_t j = 0; j < t_linear.size(); ++j) {
        const double closed = analytic::coverage_probability_closed_form_alpha4(t_linear[j], p);
        if (std::abs(analytic_pc[j] - closed) > 1e-9 * closed) {
          throw std::logic_error("coverage quadrature disagrees with the alpha=4 closed form");
        }
      }
    }
    const auto curve = mc::estimate_coverage(scenario_at_p(spec, p), t_linear, spec.threads);
    for (std::size_t j = 0; j < t_linear.size(); ++j) {
      table.rows.push_back({p, t_db[j], t_linear[j], analytic_pc[j], curve.values[j],
                            curve.values[j] - curve.ci_half_widths[j],
                            curve.values[j] + curve.ci_half_widths[j]});
    }
  }
  return render_table(table, comments, spec.format);
}

std::string render_generative(const ExperimentSpec& spec) {
  Table table;
  table.columns = {"p",     "t_db",        "t_linear",    "generative_pc", "ci_lo",
                   "ci_hi", "analytic_pc", "baseline_pc", "gap_analytic",  "gap_baseline"};
  auto comments = base_comments(spec);
  const auto t_db = grid_db(spec.threshold_grid_db);
  const auto t_linear = grid_linear(spec.threshold_grid_db);

  for (const double p : spec.p_list) {
    const auto curve =
        mc::estimate_generative_coverage(scenario_at_p(spec, p), t_linear, spec.threads);
    comments.push_back("p=" + num(p) + ": ue_samples=" + std::to_string(curve.n));
    for (std::size_t j = 0; j < t_linear.size(); ++j) {
      const double analytic_pc =
          analytic::coverage_probability(spec.scenario.alpha, t_linear[j], p);
      const double baseline_pc =
          analytic::coverage_probability(spec.scenario.alpha, t_linear[j], 1.0);
      table.rows.push_back({p, t_db[j], t_linear[j], curve.values[j],
                            curve.values[j] - curve.ci_half_widths[j],
                            curve.values[j] + curve.ci_half_widths[j], analytic_pc, baseline_pc,
                            curve.values[j] - analytic_pc, curve.values[j] - baseline_pc});
    }
  }
  return render_table(table, comments, spec.format);
}

validate::CriterionResult reproducibility_criterion(const validate::Scale& scale) {
  const auto start = std::chrono::steady_clock::now();
  validate::CriterionResult result{10, "ratio-cdf output is byte-identical across thread counts",
                                   false, "", 0};

  ExperimentSpec spec;
  spec.command = Command::ratio_cdf;
  spec.scenario.seed = scale.seed;
  spec.scenario.trials = scale.trials;
  spec.p_list = {0.3, 1.0};

  const auto dir = std::filesystem::temp_directory_path();
  const auto path1 = dir / "cellcov_repro_t1.csv";
  const auto path8 = dir / "cellcov_repro_t8.csv";
  std::string bytes1, bytes8;
  {
    ExperimentSpec one = spec;
    one.threads = 1;
    bytes1 = render_ratio_cdf(one);
    std::ofstream(path1, std::ios::binary) << bytes1;
  }
  {
    ExperimentSpec eight = spec;
    eight.threads = 8;
    bytes8 = render_ratio_cdf(eight);
    std::ofstream(path8, std::ios::binary) << bytes8;
  }
  auto read_back = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const bool identical = read_back(path1) == read_back(path8) && bytes1 == bytes8;
  std::filesystem::remove(path1);
  std::filesystem::remove(path8);

  result.passed = identical && !bytes1.empty();
  result.detail = std::to_string(bytes1.size()) + " bytes, 1-thread vs 8-thread renders " +
                  (identical ? "identical" : "DIFFER");
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string render_validation_report(const validate::Scale& scale, bool& all_passed) {
  validate::Suite suite(scale);
  auto results = suite.run_all();
  results.push_back(reproducibility_criterion(scale));

  all_passed = true;
  std::string out = "cellcov validation report (version " + std::string(kVersion) + ")\n";
  out += "seed " + std::to_string(scale.seed) + ", trials " + std::to_string(scale.trials) +
         ", generative target " + std::to_string(scale.generative_target_ue) +
         " UE samples, statistical tolerance factor " + num(scale.stat_tol) + "\n";
  char line[512];
  for (const auto& r : results) {
    all_passed = all_passed && r.passed;
    std::snprintf(line, sizeof(line), "%2d %s  %s | %s (%.1fs)\n", r.id,
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
    out += line;
  }
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
  }
  out += "summary: " + std::to_string(passed) + "/" + std::to_string(results.size()) + " passed\n";
  return out;
}

int run_spec(const ExperimentSpec& spec) {
  spec.validate();
  print_warnings(spec);

  std::string content;
  int exit_code = 0;
  if (spec.command == Command::validate) {
    validate::Scale scale = spec.quick ? validate::Scale::quick() : validate::Scale::standard();
    scale.seed = spec.scenario.seed;
    if (!spec.quick) {
      scale.trials = spec.scenario.trials;
    }
    scale.threads = spec.threads;
    bool all_passed = false;
    content = render_validation_report(scale, all_passed);
    std::cout << content;
    exit_code = all_passed ? 0 : 1;
  } else if (spec.command == Command::ratio_cdf) {
    content = render_ratio_cdf(spec);
  } else if (spec.command == Command::coverage) {
    content = render_coverage(spec);
  } else {
    content = render_generative(spec);
  }

  const std::string path = spec.resolved_output_path();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write output file '" << path << "'\n";
    return 2;
  }
  out << content;
  out.close();
  if (!out) {
    std::cerr << "error: failed while writing '" << path << "'\n";
    return 2;
  }
  if (spec.command != Command::validate) {
    std::cout << "wrote " << path << " (" << content.size() << " bytes)\n";
  }
  return exit_code;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"stochastic-geometry simulator for downlink cellular coverage"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<unsigned> threads;
    std::optional<std::string> format;
    bool quick = false;
  };
  std::map<Command, Flags> flags;

  const std::map<Command, std::string> descriptions{
      {Command::ratio_cdf, "interferer-to-serving distance ratio CDF, analytic vs simulated"},
      {Command::coverage, "SIR coverage curves, analytic vs simulated"},
      {Command::generative, "non-uniform UE model coverage vs the analytic curves"},
      {Command::validate, "run the full consistency suite and write a report"},
  };
  for (const Command command :
       {Command::ratio_cdf, Command::coverage, Command::generative, Command::validate}) {
    auto* sub = app.add_subcommand(command_name(command), descriptions.at(command));
    auto& f = flags[command];
    sub->add_option("--config", f.config, "JSON config file (flat keys)");
    sub->add_option("--output", f.output, "output file path");
    sub->add_option("--seed", f.seed, "master RNG seed");
    sub->add_option("--trials", f.trials, "number of trials");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sub->add_option("--format", f.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (command == Command::validate) {
      sub->add_flag("--quick", f.quick, "1e4 trials with 3x statistical tolerances");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, returns 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto& [command, f] : flags) {
      if (!app.get_subcommand(command_name(command))->parsed()) {
        continue;
      }
      ExperimentSpec spec = load_spec(command, f.config);
      if (!f.output.empty()) spec.output_path = f.output;
      if (f.seed) spec.scenario.seed = *f.seed;
      if (f.trials) spec.scenario.trials = *f.trials;
      if (f.threads) spec.threads = *f.threads;
      if (f.format) spec.format = *f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
      spec.quick = f.quick;
      return run_spec(spec);
    }
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cellcov::cli
