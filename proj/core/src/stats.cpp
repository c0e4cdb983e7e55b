#include "cellcov/stats.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace cellcov::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : EmpiricalDistribution(std::move(samples), Metadata()) {}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples, Metadata metadata)
    : samples_(std::move(samples)), metadata_(std::move(metadata)) {
  if (samples_.empty()) {
    throw std::invalid_argument("empirical distribution needs at least one sample");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::ecdf(double x) const noexcept {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::sample_mean() const noexcept {
  double sum = 0.0;
  for (const double x : samples_) {
    sum += x;
  }
  return sum / static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& xa = a.samples();
  const auto& xb = b.samples();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence) {
  if (n == 0) {
    throw std::invalid_argument("wilson_interval: n must be >= 1");
  }
  if (successes > n) {
    throw std::invalid_argument("wilson_interval: successes exceed n");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0, 1)");
  }
  const double z = std::sqrt(2.0) * boost::math::erf_inv(confidence);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2n = z * z / nn;
  const double denom = 1.0 + z2n;
  const double center = (phat + 0.5 * z2n) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + 0.25 * z2n / nn) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double inverse_transform_ratio_sample(double p, double u) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("thinning probability must lie in (0, 1], got " +
                                std::to_string(p));
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("uniform variate must lie strictly in (0, 1)");
  }
  return std::sqrt(1.0 + u / (1.0 - u) / p);
}

}  // namespace cellcov::stats
