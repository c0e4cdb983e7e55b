#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace cellcov::stats {

/// Sorted sample with ECDF evaluation. Immutable after construction.
class EmpiricalDistribution {
 public:
  struct Metadata {
    std::uint64_t redraw_count = 0;
    std::string source;
  };

  explicit EmpiricalDistribution(std::vector<double> samples);
  EmpiricalDistribution(std::vector<double> samples, Metadata metadata);

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double min() const noexcept { return samples_.front(); }
  double max() const noexcept { return samples_.back(); }
  const Metadata& metadata() const noexcept { return metadata_; }

  /// Fraction of samples <= x (right-continuous step function).
  double ecdf(double x) const noexcept;

  double sample_mean() const noexcept;

 private:
  std::vector<double> samples_;
  Metadata metadata_;
};

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF:
/// max over sample points of both one-sided ECDF gaps.
template <class Cdf>
double ks_distance(const EmpiricalDistribution& dist, Cdf&& cdf) {
  const auto& xs = dist.samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the merged
/// sample points.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion. Behaves sensibly at the
/// extremes: 0 successes pins lo to 0, n successes pins hi to 1.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence = 0.95);

/// Quantile function of the distance ratio R: the value r with
/// ratio_cdf(r, p) = u. Independent sampling route for R, used to cross-check
/// the geometric simulation.
double inverse_transform_ratio_sample(double p, double u);

enum class CurveKind { analytic, empirical };

/// Coverage versus SIR threshold on a shared threshold grid. Empirical curves
/// evaluate all thresholds against one SIR sample per trial, so they are
/// nonincreasing by construction; analytic curves carry zero CI half-widths.
struct CoverageCurve {
  std::vector<double> thresholds;  // linear scale, ascending
  std::vector<double> values;
  std::vector<double> ci_half_widths;
  std::uint64_t n = 0;  // trials (or UE samples) behind each value
  CurveKind kind = CurveKind::empirical;
};

}  // namespace cellcov::stats
