#include "cellcov/analytic.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cellcov::analytic {

namespace {

// atan(t)/t, continued through t = 0 by its Taylor series so the p -> 1 limit
// of mean_ratio is exact and free of cancellation.
double atan_over_t(double t) {
  if (t < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 3.0 + t2 * t2 / 5.0;
  }
  return std::atan(t) / t;
}

void check_coverage_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("coverage retention probability must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

ThinningProbability::ThinningProbability(double p) : p_(p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("thinning probability must lie in (0, 1], got " +
                                std::to_string(p));
  }
}

ChannelParams::ChannelParams(double alpha_in, double threshold_in)
    : alpha(alpha_in), threshold(threshold_in) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("path-loss exponent must exceed 2, got " + std::to_string(alpha));
  }
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("SIR threshold must be positive, got " + std::to_string(threshold));
  }
}

double ratio_cdf(double r, ThinningProbability p) {
  if (!(r >= 1.0)) {
    throw std::invalid_argument("distance ratio is >= 1 by construction, got " + std::to_string(r));
  }
  return 1.0 - 1.0 / (1.0 + p.value() * (r * r - 1.0));
}

double joint_pdf_r1_r2(double r1, double r2, double lambda, ThinningProbability p) {
  if (r1 < 0.0 || r2 < 0.0) {
    throw std::invalid_argument("distances must be nonnegative");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("PPP intensity must be positive");
  }
  if (r2 < r1) {
    return 0.0;
  }
  constexpr double pi = std::numbers::pi;
  const double two_pi_lambda = 2.0 * pi * lambda;
  const double pv = p.value();
  return pv * two_pi_lambda * two_pi_lambda * r1 * r2 *
         std::exp(-lambda * pi * r1 * r1 * (1.0 - pv)) * std::exp(-pv * lambda * pi * r2 * r2);
}

double mean_ratio(ThinningProbability p) {
  const double pv = p.value();
  const double t = std::sqrt((1.0 - pv) / pv);
  return 1.0 + atan_over_t(t) / pv;
}

double coverage_integral_rho(double alpha, double threshold) {
  const ChannelParams params(alpha, threshold);
  const double lower = std::pow(params.threshold, -2.0 / params.alpha);
  const double half_alpha = 0.5 * params.alpha;

  // 1/(1 + u^(alpha/2)) written as w/(1 + w) with w = u^(-alpha/2): w
  // underflows gracefully where u^(alpha/2) would overflow. The semi-infinite
  // range is mapped to a finite one inside the integrator, so no truncation
  // of the tail is involved.
  auto integrand = [half_alpha](double u) {
    const double w = std::pow(u, -half_alpha);
    return w / (1.0 + w);
  };

  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const double integral = integrator.integrate(
      integrand, lower, std::numeric_limits<double>::infinity(), 1e-10, &error);
  return std::pow(params.threshold, 2.0 / params.alpha) * integral;
}

double coverage_rho_closed_form_alpha4(double threshold) {
  const ChannelParams params(4.0, threshold);
  const double sqrt_t = std::sqrt(params.threshold);
  return sqrt_t * (std::numbers::pi / 2.0 - std::atan(1.0 / sqrt_t));
}

double coverage_probability(double alpha, double threshold, double p) {
  check_coverage_p(p);
  if (p == 0.0) {
    (void)ChannelParams(alpha, threshold);  // still validate the domain
    return 1.0;
  }
  return 1.0 / (1.0 + p * coverage_integral_rho(alpha, threshold));
}

double coverage_probability_closed_form_alpha4(double threshold, double p) {
  check_coverage_p(p);
  return 1.0 / (1.0 + p * coverage_rho_closed_form_alpha4(threshold));
}

}  // namespace cellcov::analytic
