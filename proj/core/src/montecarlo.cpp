#include "cellcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cellcov/errors.hpp"
#include "cellcov/geometry.hpp"
#include "cellcov/rng.hpp"

namespace cellcov::mc {

namespace {

constexpr std::uint32_t kMaxPatternRegenerations = 100;
constexpr std::uint32_t kMaxRatioRedraws = 64;
// Stream sequence = redraw * stride + regeneration, so redraws and empty-
// pattern regenerations never collide.
constexpr std::uint32_t kSequenceStride = 128;

constexpr double kInf = std::numeric_limits<double>::infinity();

// d^-alpha from the squared distance. alpha = 4 avoids pow on the hot path.
inline double path_gain(double d2, double alpha) {
  if (alpha == 4.0) {
    const double inv = 1.0 / d2;
    return inv * inv;
  }
  return std::pow(d2, -0.5 * alpha);
}

// Runs body(t) for t in [0, trials), split into contiguous blocks across
// threads. body may only touch per-trial state, so results are identical for
// every thread count.
void for_each_trial(std::uint64_t trials, unsigned threads,
                    const std::function<void(std::uint64_t)>& body) {
  unsigned n_threads = threads;
  if (n_threads == 0) {
    n_threads = std::max(1u, std::thread::hardware_concurrency());
  }
  if (trials < n_threads) {
    n_threads = static_cast<unsigned>(std::max<std::uint64_t>(1, trials));
  }
  if (n_threads <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      body(t);
    }
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  const std::uint64_t base = trials / n_threads;
  const std::uint64_t extra = trials % n_threads;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < n_threads; ++w) {
    const std::uint64_t count = base + (w < extra ? 1 : 0);
    const std::uint64_t end = begin + count;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::uint64_t t = begin; t < end; ++t) {
          body(t);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    });
    begin = end;
  }
  for (auto& worker : pool) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

geom::PointPattern sample_trial_pattern(const ScenarioConfig& cfg, std::uint64_t trial_index,
                                        std::uint32_t redraw, double radius) {
  const geom::Window window = geom::Window::disk({0.0, 0.0}, radius);
  for (std::uint32_t regen = 0; regen < kMaxPatternRegenerations; ++regen) {
    auto rng = RngStream::derive(cfg.seed, trial_index, StreamRole::pattern,
                                 redraw * kSequenceStride + regen);
    auto pattern = geom::sample_ppp(cfg.lambda, window, rng);
    if (!pattern.empty()) {
      return pattern;
    }
  }
  throw ConfigurationError("pattern was empty after " + std::to_string(kMaxPatternRegenerations) +
                           " regenerations; expected point count " +
                           std::to_string(cfg.lambda * std::numbers::pi * radius * radius) +
                           " is too small to simulate");
}

void check_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) {
    throw std::invalid_argument("threshold list must not be empty");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i])) {
      throw std::invalid_argument("SIR thresholds must be positive and finite");
    }
    if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
      throw std::invalid_argument("SIR thresholds must be strictly ascending");
    }
  }
}

stats::CoverageCurve curve_from_sirs(const std::vector<double>& sirs,
                                     const std::vector<double>& thresholds) {
  stats::CoverageCurve curve;
  curve.thresholds = thresholds;
  curve.kind = stats::CurveKind::empirical;
  curve.n = sirs.size();
  curve.values.reserve(thresholds.size());
  curve.ci_half_widths.reserve(thresholds.size());
  for (const double t : thresholds) {
    std::uint64_t covered = 0;
    for (const double sir : sirs) {
      covered += sir > t ? 1 : 0;
    }
    curve.values.push_back(static_cast<double>(covered) / static_cast<double>(curve.n));
    curve.ci_half_widths.push_back(stats::wilson_interval(covered, curve.n).half_width());
  }
  return curve;
}

}  // namespace

double default_window_radius(double lambda, double alpha) {
  if (!(lambda > 0.0) || !(alpha > 2.0)) {
    throw std::invalid_argument("window policy needs lambda > 0 and alpha > 2");
  }
  const double typical_serving = 0.5 / std::sqrt(lambda);
  const double tail_radius = typical_serving * std::pow(1000.0, 1.0 / (alpha - 2.0));
  const double count_radius = std::sqrt(500.0 / (lambda * std::numbers::pi));
  return std::max(tail_radius, count_radius);
}

double ScenarioConfig::resolved_window_radius() const {
  return window_radius > 0.0 ? window_radius : default_window_radius(lambda, alpha);
}

std::vector<std::string> ScenarioConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in [0, 1]");
  }
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must exceed 2");
  }
  if (window_radius > 0.0 && !std::isfinite(window_radius)) {
    throw std::invalid_argument("window_radius must be finite");
  }
  if (!(guard_fraction > 0.0 && guard_fraction < 1.0)) {
    throw std::invalid_argument("guard_fraction must lie in (0, 1)");
  }
  if (users_per_cell < 1) {
    throw std::invalid_argument("users_per_cell must be >= 1");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }

  std::vector<std::string> warnings;
  const double radius = resolved_window_radius();
  const double expected_points = lambda * std::numbers::pi * radius * radius;
  if (expected_points < 50.0) {
    warnings.push_back("expected point count " + std::to_string(expected_points) +
                       " is below 50; boundary effects will dominate");
  }
  const double policy = default_window_radius(lambda, alpha);
  if (radius < policy) {
    warnings.push_back("window radius " + std::to_string(radius) +
                       " is below the truncation policy radius " + std::to_string(policy) +
                       "; ignored interference beyond the window may bias SIR upward");
  }
  return warnings;
}

TrialOutcome run_typical_ue_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                                  std::uint32_t redraw) {
  cfg.validate();
  const double radius = cfg.resolved_window_radius();
  const geom::PointPattern pattern = sample_trial_pattern(cfg, trial_index, redraw, radius);
  const geom::Point2 origin{0.0, 0.0};

  // Serving BS: nearest point to the origin, ties to the lower index.
  std::size_t serving = 0;
  double serving_d2 = kInf;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const double d2 = geom::squared_distance(origin, pattern.points[i]);
    if (d2 < serving_d2) {
      serving_d2 = d2;
      serving = i;
    }
  }

  auto thin_rng =
      RngStream::derive(cfg.seed, trial_index, StreamRole::thinning, redraw * kSequenceStride);
  const geom::ThinResult thinned = geom::conditional_thin(pattern, serving, cfg.p, thin_rng);

  // Fading order: serving link first, then retained interferers by index.
  auto fading_rng =
      RngStream::derive(cfg.seed, trial_index, StreamRole::fading, redraw * kSequenceStride);
  const double signal = fading_rng.exponential() * path_gain(serving_d2, cfg.alpha);

  double interference = 0.0;
  double nearest_interferer_d2 = kInf;
  for (std::size_t k = 0; k < thinned.pattern.size(); ++k) {
    if (thinned.retained_indices[k] == serving) {
      continue;
    }
    const double d2 = geom::squared_distance(origin, thinned.pattern.points[k]);
    interference += fading_rng.exponential() * path_gain(d2, cfg.alpha);
    nearest_interferer_d2 = std::min(nearest_interferer_d2, d2);
  }

  TrialOutcome outcome;
  outcome.r1 = std::sqrt(serving_d2);
  if (nearest_interferer_d2 < kInf) {
    outcome.r2 = std::sqrt(nearest_interferer_d2);
  }
  outcome.sir = interference > 0.0 ? signal / interference : kInf;
  return outcome;
}

stats::EmpiricalDistribution estimate_ratio_distribution(const ScenarioConfig& cfg,
                                                         unsigned threads) {
  cfg.validate();
  if (!(cfg.p > 0.0)) {
    throw std::invalid_argument("the distance ratio is undefined at p = 0 (no interferer)");
  }

  std::vector<double> samples(cfg.trials);
  std::vector<std::uint32_t> redraws(cfg.trials, 0);
  for_each_trial(cfg.trials, threads, [&](std::uint64_t t) {
    for (std::uint32_t redraw = 0; redraw < kMaxRatioRedraws; ++redraw) {
      const TrialOutcome outcome = run_typical_ue_trial(cfg, t, redraw);
      if (outcome.r2) {
        samples[t] = *outcome.r2 / outcome.r1;
        redraws[t] = redraw;
        return;
      }
    }
    throw SamplingFailureError(
        "no interferer survived thinning in " + std::to_string(kMaxRatioRedraws) +
            " redraws of trial " + std::to_string(t) + "; increase lambda, p, or the window",
        kMaxRatioRedraws);
  });

  stats::EmpiricalDistribution::Metadata metadata;
  metadata.source = "typical-ue ratio simulation";
  for (const auto r : redraws) {
    metadata.redraw_count += r;
  }
  return stats::EmpiricalDistribution(std::move(samples), std::move(metadata));
}

stats::CoverageCurve estimate_coverage(const ScenarioConfig& cfg,
                                       const std::vector<double>& thresholds, unsigned threads) {
  cfg.validate();
  check_thresholds(thresholds);
  std::vector<double> sirs(cfg.trials);
  for_each_trial(cfg.trials, threads,
                 [&](std::uint64_t t) { sirs[t] = run_typical_ue_trial(cfg, t).sir; });
  return curve_from_sirs(sirs, thresholds);
}

std::vector<TrialOutcome> run_generative_trial(const ScenarioConfig& cfg,
                                               std::uint64_t trial_index) {
  cfg.validate();
  const double radius = cfg.resolved_window_radius();
  const geom::PointPattern pattern = sample_trial_pattern(cfg, trial_index, 0, radius);
  const geom::NeighborIndex full_index(pattern);

  auto thin_rng = RngStream::derive(cfg.seed, trial_index, StreamRole::thinning, 0);
  const geom::ThinResult bs = geom::thin(pattern, cfg.p, thin_rng);
  if (bs.pattern.empty()) {
    return {};
  }
  const geom::NeighborIndex bs_index(bs.pattern);

  auto placement_rng = RngStream::derive(cfg.seed, trial_index, StreamRole::ue_placement, 0);
  auto fading_rng = RngStream::derive(cfg.seed, trial_index, StreamRole::fading, 0);

  const double eval_radius = (1.0 - cfg.guard_fraction) * radius;
  const double eval_radius_sq = eval_radius * eval_radius;
  const geom::Point2 origin{0.0, 0.0};

  std::vector<TrialOutcome> outcomes;
  for (std::size_t k = 0; k < bs.pattern.size(); ++k) {
    const geom::Point2 site = bs.pattern.points[k];
    if (geom::squared_distance(origin, site) > eval_radius_sq) {
      continue;  // border cell: contributes interference but is not evaluated
    }
    const std::size_t cell = bs.retained_indices[k];
    for (std::uint32_t u = 0; u < cfg.users_per_cell; ++u) {
      const geom::Point2 ue =
          full_index.sample_uniform_in_cell(cell, placement_rng);

      // The cell's BS survives thinning, and no point of the thinned set can
      // be closer to the UE than its full-pattern owner. Verify anyway.
      if (bs_index.owner(ue) != k) {
        throw std::logic_error("generative trial: UE is not served by its cell's BS");
      }

      const double serving_d2 = geom::squared_distance(ue, site);
      const double signal = fading_rng.exponential() * path_gain(serving_d2, cfg.alpha);
      double interference = 0.0;
      double nearest_interferer_d2 = kInf;
      for (std::size_t m = 0; m < bs.pattern.size(); ++m) {
        if (m == k) {
          continue;
        }
        const double d2 = geom::squared_distance(ue, bs.pattern.points[m]);
        interference += fading_rng.exponential() * path_gain(d2, cfg.alpha);
        nearest_interferer_d2 = std::min(nearest_interferer_d2, d2);
      }

      TrialOutcome outcome;
      outcome.r1 = std::sqrt(serving_d2);
      if (nearest_interferer_d2 < kInf) {
        outcome.r2 = std::sqrt(nearest_interferer_d2);
      }
      outcome.sir = interference > 0.0 ? signal / interference : kInf;
      outcomes.push_back(outcome);
    }
  }
  return outcomes;
}

stats::CoverageCurve estimate_generative_coverage(const ScenarioConfig& cfg,
                                                  const std::vector<double>& thresholds,
                                                  unsigned threads) {
  cfg.validate();
  check_thresholds(thresholds);

  std::vector<std::vector<TrialOutcome>> per_trial(cfg.trials);
  for_each_trial(cfg.trials, threads,
                 [&](std::uint64_t t) { per_trial[t] = run_generative_trial(cfg, t); });

  std::vector<double> sirs;
  for (const auto& outcomes : per_trial) {
    for (const auto& outcome : outcomes) {
      sirs.push_back(outcome.sir);
    }
  }
  if (sirs.empty()) {
    throw ConfigurationError(
        "generative model produced no UE samples; all base stations were thinned away");
  }
  return curve_from_sirs(sirs, thresholds);
}

}  // namespace cellcov::mc
