#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellcov/stats.hpp"

namespace cellcov::validate {

/// Knobs for the consistency suite. `standard` runs the full desk-scale
/// checks; `quick` cuts trials to 1e4 and widens the statistical tolerances
/// by 3x (numeric tolerances are never widened).
struct Scale {
  std::uint64_t trials = 100000;
  std::uint64_t generative_target_ue = 50000;
  double stat_tol = 1.0;
  unsigned threads = 0;
  std::uint64_t seed = 12345;

  static Scale standard() { return {}; }
  static Scale quick() {
    Scale s;
    s.trials = 10000;
    s.generative_target_ue = 5000;
    s.stat_tol = 3.0;
    return s;
  }
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kNumCoreCriteria = 9;

/// Runs the numbered simulation-vs-formula consistency criteria (1..9).
/// Criterion 10 (byte-identical CLI output across thread counts) lives with
/// the command-line front end. A Suite instance caches the generative runs
/// that criteria 7 and 8 share.
class Suite {
 public:
  explicit Suite(Scale scale) : scale_(scale) {}

  CriterionResult run(int id);
  std::vector<CriterionResult> run_all();

  const Scale& scale() const noexcept { return scale_; }

 private:
  struct GenerativeRun {
    double p = 0.0;
    stats::CoverageCurve curve;
  };

  const std::vector<GenerativeRun>& generative_runs();

  Scale scale_;
  std::optional<std::vector<GenerativeRun>> generative_;
};

}  // namespace cellcov::validate
