#pragma once

#include <string>
#include <vector>

#include "cellcov/cli/experiment.hpp"
#include "cellcov/validate.hpp"

namespace cellcov::cli {

/// Render the full output file for a command as a byte string. Pure given the
/// spec (and spec.threads, which does not influence the bytes).
std::string render_ratio_cdf(const ExperimentSpec& spec);
std::string render_coverage(const ExperimentSpec& spec);
std::string render_generative(const ExperimentSpec& spec);

/// Criterion 10: a fixed-seed ratio-cdf render must be byte-identical when
/// computed with 1 thread and with 8.
validate::CriterionResult reproducibility_criterion(const validate::Scale& scale);

/// Runs criteria 1..9 plus the reproducibility criterion and renders the
/// report. all_passed reflects every criterion.
std::string render_validation_report(const validate::Scale& scale, bool& all_passed);

/// Executes a fully parsed spec: renders, writes the output file, prints a
/// one-line summary. Returns the process exit code (0 success, 1 validation
/// failure, 2 usage or I/O error).
int run_spec(const ExperimentSpec& spec);

/// Full command line entry point.
int run(int argc, const char* const* argv);

}  // namespace cellcov::cli
