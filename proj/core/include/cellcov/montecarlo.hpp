#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellcov/stats.hpp"

namespace cellcov::mc {

/// Everything that determines an experiment, including the seed. Two runs
/// with equal configs produce identical results regardless of thread count.
struct ScenarioConfig {
  double lambda = 1.0;           // BS intensity before thinning
  double p = 1.0;                // retention probability
  double alpha = 4.0;            // path-loss exponent, > 2
  double window_radius = 0.0;    // simulation disk radius; <= 0 selects the policy default
  double guard_fraction = 0.2;   // outer fraction of the window excluded from evaluation
  std::uint32_t users_per_cell = 1;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;

  double resolved_window_radius() const;

  /// Throws std::invalid_argument on hard violations; returns warnings for
  /// configurations that are legal but statistically questionable (expected
  /// point count below 50, window smaller than the truncation policy asks).
  std::vector<std::string> validate() const;
};

/// Smallest window radius satisfying the truncation policy: the expected
/// interference from beyond the window stays under 1e-3 of the in-window
/// interference seen from the typical serving distance 1/(2 sqrt(lambda)),
/// and the expected point count lambda pi R^2 is at least 500.
double default_window_radius(double lambda, double alpha);

struct TrialOutcome {
  double r1 = 0.0;           // serving distance
  std::optional<double> r2;  // nearest retained interferer distance, absent if none survived
  double sir = 0.0;          // +infinity when no interference survives
};

/// One trial of the typical-UE model: sample a PPP on the disk window, serve
/// from the nearest point, conditionally thin the rest with probability p,
/// then form the SIR with unit-mean exponential fading per link.
/// Deterministic given (cfg.seed, trial_index, redraw).
TrialOutcome run_typical_ue_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                                  std::uint32_t redraw = 0);

/// Distribution of R = r2/r1 over cfg.trials trials. Trials where no
/// interferer survives thinning are redrawn from a fresh substream; the total
/// redraw count is reported in the result's metadata. Rejects p = 0.
stats::EmpiricalDistribution estimate_ratio_distribution(const ScenarioConfig& cfg,
                                                         unsigned threads = 0);

/// Empirical P(SIR > T) for each threshold, sharing one SIR sample per trial
/// across the whole grid, with Wilson 95% half-widths.
stats::CoverageCurve estimate_coverage(const ScenarioConfig& cfg,
                                       const std::vector<double>& thresholds,
                                       unsigned threads = 0);

/// One trial of the generative non-uniform UE model: sample a PPP, thin it to
/// get the BS set, place users_per_cell UEs uniformly in the original cell of
/// every retained BS inside the inner evaluation disk, and compute each UE's
/// SIR against all other retained BSs. Each UE is served by its cell's BS,
/// which is provably its nearest retained BS (checked per UE).
std::vector<TrialOutcome> run_generative_trial(const ScenarioConfig& cfg,
                                               std::uint64_t trial_index);

/// Aggregates run_generative_trial over cfg.trials trials; every UE sample
/// carries equal weight. The curve's n is the total UE count.
stats::CoverageCurve estimate_generative_coverage(const ScenarioConfig& cfg,
                                                  const std::vector<double>& thresholds,
                                                  unsigned threads = 0);

}  // namespace cellcov::mc
