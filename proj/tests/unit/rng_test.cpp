#include "cellcov/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

using cellcov::RngStream;
using cellcov::StreamRole;

static_assert(std::uniform_random_bit_generator<RngStream>);

TEST_CASE("streams are deterministic in their coordinates") {
  auto a = RngStream::derive(42, 7, StreamRole::fading, 3);
  auto b = RngStream::derive(42, 7, StreamRole::fading, 3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a() == b());
  }
}

TEST_CASE("changing any coordinate changes the stream") {
  auto base = RngStream::derive(42, 7, StreamRole::fading, 3);
  std::vector<RngStream> others{
      RngStream::derive(43, 7, StreamRole::fading, 3),
      RngStream::derive(42, 8, StreamRole::fading, 3),
      RngStream::derive(42, 7, StreamRole::thinning, 3),
      RngStream::derive(42, 7, StreamRole::fading, 4),
  };
  const auto x = base();
  for (auto& other : others) {
    CHECK(other() != x);
  }
}

TEST_CASE("uniform01 lies in [0,1) with the right mean") {
  auto rng = RngStream::derive(1, 0, StreamRole::pattern);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is 1/sqrt(12 n) ~ 2.9e-4
  CHECK(std::abs(sum / n - 0.5) < 1.2e-3);
}

TEST_CASE("exponential draws are nonnegative with unit mean") {
  auto rng = RngStream::derive(2, 0, StreamRole::fading);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential();
    REQUIRE(e >= 0.0);
    sum += e;
  }
  CHECK(std::abs(sum / n - 1.0) < 4e-3);
}

TEST_CASE("stream works as a std distribution engine") {
  auto rng = RngStream::derive(3, 0, StreamRole::pattern);
  std::poisson_distribution<long long> poisson(100.0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    sum += static_cast<double>(poisson(rng));
  }
  // sd of the mean is sqrt(100/n) ~ 0.07
  CHECK(std::abs(sum / n - 100.0) < 0.3);
}
