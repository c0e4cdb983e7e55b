#include "cellcov/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace cellcov;
using analytic::ThinningProbability;

TEST_CASE("thinning probability domain") {
  CHECK_THROWS_AS(ThinningProbability(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ThinningProbability(-0.2), std::invalid_argument);
  CHECK_THROWS_AS(ThinningProbability(1.0001), std::invalid_argument);
  CHECK(ThinningProbability(1.0).value() == 1.0);
  CHECK(ThinningProbability(1e-9).value() == 1e-9);
}

TEST_CASE("channel parameter domain") {
  CHECK_THROWS_AS(analytic::ChannelParams(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(analytic::ChannelParams(4.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(analytic::ChannelParams(2.1, 1e-6));
}

TEST_CASE("ratio_cdf point values") {
  CHECK(analytic::ratio_cdf(1.0, ThinningProbability(0.3)) == 0.0);
  CHECK(analytic::ratio_cdf(1.0, ThinningProbability(1.0)) == 0.0);
  CHECK(analytic::ratio_cdf(2.0, ThinningProbability(1.0)) == doctest::Approx(0.75).epsilon(1e-14));
  // 1 - 1/1.9
  CHECK(analytic::ratio_cdf(2.0, ThinningProbability(0.3)) ==
        doctest::Approx(0.4736842105263158).epsilon(1e-14));
  CHECK_THROWS_AS(analytic::ratio_cdf(0.999, ThinningProbability(0.5)), std::invalid_argument);
}

TEST_CASE("ratio_cdf is a valid CDF for every p") {
  for (const double p : {0.05, 0.3, 0.5, 0.9, 1.0}) {
    const ThinningProbability tp(p);
    double prev = analytic::ratio_cdf(1.0, tp);
    CHECK(prev == 0.0);
    for (int i = 1; i <= 400; ++i) {
      const double r = 1.0 + i * 0.05;
      const double f = analytic::ratio_cdf(r, tp);
      CHECK(f >= prev);
      CHECK(f < 1.0);
      prev = f;
    }
    CHECK(analytic::ratio_cdf(1e9, tp) == doctest::Approx(1.0));
  }
}

TEST_CASE("smaller p pushes mass to larger ratios") {
  // stochastic ordering: F(r; p1) < F(r; p2) for p1 < p2, r > 1
  for (const double r : {1.1, 1.5, 2.0, 5.0, 20.0}) {
    double prev = analytic::ratio_cdf(r, ThinningProbability(0.1));
    for (const double p : {0.3, 0.5, 0.7, 0.9, 1.0}) {
      const double f = analytic::ratio_cdf(r, ThinningProbability(p));
      CHECK(f > prev);
      prev = f;
    }
  }
}

TEST_CASE("joint density support and domain") {
  const ThinningProbability p(0.4);
  CHECK(analytic::joint_pdf_r1_r2(0.0, 1.0, 1.0, p) == 0.0);
  CHECK(analytic::joint_pdf_r1_r2(2.0, 1.0, 1.0, p) == 0.0);  // r2 < r1
  CHECK(analytic::joint_pdf_r1_r2(0.5, 1.0, 1.0, p) > 0.0);
  CHECK_THROWS_AS(analytic::joint_pdf_r1_r2(-0.1, 1.0, 1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(analytic::joint_pdf_r1_r2(0.1, -1.0, 1.0, p), std::invalid_argument);
  CHECK_THROWS_AS(analytic::joint_pdf_r1_r2(0.1, 1.0, 0.0, p), std::invalid_argument);
}

TEST_CASE("joint density integrates to one") {
  for (const auto& [lambda, p] : {std::pair{1.0, 0.3}, {2.0, 0.7}, {0.5, 1.0}}) {
    const ThinningProbability tp(p);
    const double mass = oracles::integrate_over_wedge(
        [&](double r1, double r2) { return analytic::joint_pdf_r1_r2(r1, r2, lambda, tp); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("ratio CCDF from the joint density matches the closed form") {
  for (const auto& [lambda, p] : {std::pair{1.0, 0.3}, {2.0, 0.7}}) {
    const ThinningProbability tp(p);
    for (const double r : {1.2, 2.0, 5.0}) {
      const double by_integration = oracles::ccdf_of_ratio_by_quadrature(
          [&](double r1, double r2) { return analytic::joint_pdf_r1_r2(r1, r2, lambda, tp); }, r);
      const double closed = 1.0 / (1.0 + p * (r * r - 1.0));
      CHECK(by_integration == doctest::Approx(closed).epsilon(1e-6));
    }
  }
}

TEST_CASE("mean_ratio values and limit") {
  CHECK(analytic::mean_ratio(ThinningProbability(1.0)) == 2.0);
  CHECK(analytic::mean_ratio(ThinningProbability(0.5)) ==
        doctest::Approx(1.0 + std::numbers::pi / 2.0).epsilon(1e-14));
  CHECK(analytic::mean_ratio(ThinningProbability(0.999999)) == doctest::Approx(2.0).epsilon(1e-3));
  // strictly decreasing, always >= 2
  double prev = analytic::mean_ratio(ThinningProbability(0.01));
  for (const double p : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0}) {
    const double m = analytic::mean_ratio(ThinningProbability(p));
    CHECK(m >= 2.0);
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("coverage integral at alpha = 4") {
  CHECK(analytic::coverage_integral_rho(4.0, 1.0) ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-9));
  for (const double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const double closed = analytic::coverage_rho_closed_form_alpha4(t);
    CHECK(analytic::coverage_integral_rho(4.0, t) == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("coverage integral for general exponents against the series-split oracle") {
  for (const double alpha : {2.5, 3.0, 3.5, 5.0, 6.0}) {
    for (const double t : {0.1, 1.0, 10.0}) {
      const double quad = analytic::coverage_integral_rho(alpha, t);
      const double oracle = oracles::rho_by_series_split(alpha, t);
      CHECK(quad == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("coverage integral domain and limits") {
  CHECK_THROWS_AS(analytic::coverage_integral_rho(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(analytic::coverage_integral_rho(4.0, -1.0), std::invalid_argument);
  // vanishing threshold: rho -> 0 and coverage -> 1
  CHECK(analytic::coverage_integral_rho(4.0, 1e-8) <= 1e-4);
  CHECK(analytic::coverage_probability(4.0, 1e-8, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("coverage probability point values") {
  CHECK(analytic::coverage_probability(4.0, 1.0, 0.0) == 1.0);
  CHECK(analytic::coverage_probability(3.0, 17.0, 0.0) == 1.0);
  CHECK(analytic::coverage_probability(4.0, 1.0, 1.0) ==
        doctest::Approx(0.5600991535115574).epsilon(1e-9));
  CHECK(analytic::coverage_probability(4.0, 1.0, 0.5) ==
        doctest::Approx(0.7180301998765338).epsilon(1e-9));
  CHECK_THROWS_AS(analytic::coverage_probability(4.0, 1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(analytic::coverage_probability(4.0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("coverage probability is monotone in p and in the threshold") {
  for (const double alpha : {2.5, 4.0, 6.0}) {
    for (const double t : {0.1, 1.0, 10.0}) {
      double prev = analytic::coverage_probability(alpha, t, 0.0);
      CHECK(prev == 1.0);
      for (const double p : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double c = analytic::coverage_probability(alpha, t, p);
        CHECK(c < prev);
        CHECK(c > 0.0);
        prev = c;
      }
    }
    double prev_t = 1.0;
    for (const double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double c = analytic::coverage_probability(alpha, t, 0.8);
      CHECK(c < prev_t);
      prev_t = c;
    }
  }
}
