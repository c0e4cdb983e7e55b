#include "cellcov/geometry.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cellcov/errors.hpp"
#include "cellcov/rng.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cellcov;
using geom::Point2;
using geom::PointPattern;
using geom::Window;

namespace {

RngStream test_stream(std::uint64_t n) { return RngStream::derive(0xce11c0f, n, StreamRole::pattern); }

PointPattern make_pattern(std::vector<Point2> points, Window window) {
  const double intensity = static_cast<double>(points.size()) / window.area();
  return PointPattern{std::move(points), window, intensity};
}

}  // namespace

TEST_CASE("window areas and membership") {
  const auto disk = Window::disk({0, 0}, 2.0);
  CHECK(disk.area() == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(disk.contains({2.0, 0.0}));
  CHECK_FALSE(disk.contains({2.0, 0.1}));

  const auto square = Window::square({1, 1}, 0.5);
  CHECK(square.area() == doctest::Approx(1.0));
  CHECK(square.contains({1.5, 0.5}));
  CHECK_FALSE(square.contains({1.51, 1.0}));

  CHECK_THROWS_AS(Window::disk({0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Window::square({0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("sample_ppp count matches lambda * area") {
  SUBCASE("disk of radius 10 at lambda 1") {
    double total = 0.0;
    const int draws = 400;
    for (int i = 0; i < draws; ++i) {
      auto rng = test_stream(i);
      total += static_cast<double>(geom::sample_ppp(1.0, Window::disk({0, 0}, 10.0), rng).size());
    }
    const double expected = 100.0 * std::numbers::pi;  // ~314.16
    // sd of the mean count is sqrt(mean/draws) ~ 0.89
    CHECK(std::abs(total / draws - expected) < 3.6);
  }
  SUBCASE("square of halfwidth 1 at lambda 5") {
    double total = 0.0;
    const int draws = 2000;
    for (int i = 0; i < draws; ++i) {
      auto rng = test_stream(1000 + i);
      total += static_cast<double>(geom::sample_ppp(5.0, Window::square({0, 0}, 1.0), rng).size());
    }
    CHECK(std::abs(total / draws - 20.0) < 0.4);
  }
}

TEST_CASE("sample_ppp is deterministic for a fixed stream") {
  auto rng1 = test_stream(5);
  auto rng2 = test_stream(5);
  const auto a = geom::sample_ppp(1.0, Window::disk({0, 0}, 10.0), rng1);
  const auto b = geom::sample_ppp(1.0, Window::disk({0, 0}, 10.0), rng2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
  }
}

TEST_CASE("sample_ppp points lie inside the window") {
  for (int i = 0; i < 20; ++i) {
    auto rng = test_stream(2000 + i);
    const auto window = i % 2 == 0 ? Window::disk({3, -2}, 4.0) : Window::square({-1, 5}, 3.0);
    const auto pattern = geom::sample_ppp(2.0, window, rng);
    for (const auto& pt : pattern.points) {
      REQUIRE(window.contains(pt));
    }
  }
}

TEST_CASE("sample_ppp rejects bad intensity") {
  auto rng = test_stream(0);
  CHECK_THROWS_AS(geom::sample_ppp(0.0, Window::disk({0, 0}, 1.0), rng), std::invalid_argument);
  CHECK_THROWS_AS(geom::sample_ppp(-1.0, Window::disk({0, 0}, 1.0), rng), std::invalid_argument);
}

TEST_CASE("nearest_two on hand-built patterns") {
  const auto window = Window::square({0, 0}, 10.0);
  SUBCASE("distinct distances") {
    const auto pattern = make_pattern({{1, 0}, {0, 3}, {2, 2}}, window);
    const auto result = geom::nearest_two(pattern, {0, 0});
    CHECK(result.index1 == 0);
    CHECK(result.r1 == doctest::Approx(1.0));
    CHECK(result.index2 == 2);
    CHECK(result.r2 == doctest::Approx(2.0 * std::sqrt(2.0)));
  }
  SUBCASE("tie goes to the lower index") {
    const auto pattern = make_pattern({{1, 0}, {-1, 0}}, window);
    const auto result = geom::nearest_two(pattern, {0, 0});
    CHECK(result.index1 == 0);
    CHECK(result.index2 == 1);
    CHECK(result.r1 == doctest::Approx(1.0));
    CHECK(result.r2 == doctest::Approx(1.0));
  }
  SUBCASE("one point is not enough") {
    const auto pattern = make_pattern({{1, 0}}, window);
    CHECK_THROWS_AS(geom::nearest_two(pattern, {0, 0}), InsufficientPointsError);
  }
}

TEST_CASE("conditional_thin endpoints") {
  auto rng = test_stream(10);
  const auto pattern = geom::sample_ppp(1.0, Window::disk({0, 0}, 8.0), rng);
  REQUIRE(pattern.size() >= 3);

  SUBCASE("p = 1 is the identity") {
    auto thin_rng = test_stream(11);
    const auto result = geom::conditional_thin(pattern, 2, 1.0, thin_rng);
    REQUIRE(result.pattern.size() == pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      CHECK(result.retained_indices[i] == i);
      CHECK(result.pattern.points[i].x == pattern.points[i].x);
    }
  }
  SUBCASE("p = 0 keeps exactly the exempt point") {
    auto thin_rng = test_stream(12);
    const auto result = geom::conditional_thin(pattern, 2, 0.0, thin_rng);
    REQUIRE(result.pattern.size() == 1);
    CHECK(result.retained_indices[0] == 2);
    CHECK(result.pattern.points[0].x == pattern.points[2].x);
  }
  SUBCASE("bad arguments") {
    auto thin_rng = test_stream(13);
    CHECK_THROWS_AS(geom::conditional_thin(pattern, pattern.size(), 0.5, thin_rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(geom::conditional_thin(pattern, 0, 1.5, thin_rng), std::invalid_argument);
    CHECK_THROWS_AS(geom::conditional_thin(pattern, 0, -0.1, thin_rng), std::invalid_argument);
  }
}

TEST_CASE("conditional_thin retention rate of non-exempt points") {
  // 100 repetitions on a 10^4 point pattern, aggregated z test at p = 0.3.
  const auto window = Window::square({0, 0}, 50.0);
  std::vector<Point2> points;
  points.reserve(10000);
  auto fill_rng = test_stream(20);
  for (int i = 0; i < 10000; ++i) {
    points.push_back(window.sample(fill_rng));
  }
  const auto pattern = make_pattern(std::move(points), window);

  std::uint64_t retained = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    auto rng = test_stream(21 + rep);
    retained += geom::conditional_thin(pattern, 0, 0.3, rng).pattern.size() - 1;
  }
  const std::uint64_t n = static_cast<std::uint64_t>(reps) * (pattern.size() - 1);
  CHECK(oracles::binomial_proportion_test(retained, n, 0.3, 3.0));
}

TEST_CASE("thin endpoints and retention rate") {
  auto rng = test_stream(30);
  const auto pattern = geom::sample_ppp(1.0, Window::disk({0, 0}, 8.0), rng);
  REQUIRE(pattern.size() >= 2);

  SUBCASE("p = 1 keeps everything in order") {
    auto thin_rng = test_stream(31);
    const auto result = geom::thin(pattern, 1.0, thin_rng);
    REQUIRE(result.pattern.size() == pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      CHECK(result.retained_indices[i] == i);
    }
  }
  SUBCASE("p = 0 keeps nothing") {
    auto thin_rng = test_stream(32);
    const auto result = geom::thin(pattern, 0.0, thin_rng);
    CHECK(result.pattern.empty());
    CHECK(result.retained_indices.empty());
  }
  SUBCASE("retained count concentrates around n p") {
    const auto window = Window::square({0, 0}, 50.0);
    std::vector<Point2> points;
    auto fill_rng = test_stream(33);
    for (int i = 0; i < 10000; ++i) {
      points.push_back(window.sample(fill_rng));
    }
    const auto big = make_pattern(std::move(points), window);

    // Per-run: within 3 sd of 5000 in at least 99% of runs. Aggregate:
    // two-sided proportion test at the 0.001 level (z = 3.29).
    const int runs = 200;
    int in_band = 0;
    std::uint64_t total = 0;
    for (int run = 0; run < runs; ++run) {
      auto thin_rng = test_stream(34 + run);
      const auto count = geom::thin(big, 0.5, thin_rng).pattern.size();
      total += count;
      if (std::abs(static_cast<double>(count) - 5000.0) <= 3.0 * std::sqrt(10000.0 * 0.25)) {
        ++in_band;
      }
    }
    CHECK(in_band >= runs * 99 / 100);
    CHECK(oracles::binomial_proportion_test(total, 10000ull * runs, 0.5, 3.29));
  }
}

TEST_CASE("thinning never moves, duplicates, or reorders points") {
  for (int iter = 0; iter < 30; ++iter) {
    auto rng = test_stream(300 + iter);
    const auto pattern = geom::sample_ppp(3.0, Window::square({0, 0}, 5.0), rng);
    if (pattern.empty()) {
      continue;
    }
    const double p = rng.uniform01();
    auto thin_rng = test_stream(400 + iter);
    const auto result = iter % 2 == 0
                            ? geom::thin(pattern, p, thin_rng)
                            : geom::conditional_thin(pattern, pattern.size() / 2, p, thin_rng);
    REQUIRE(result.pattern.size() == result.retained_indices.size());
    for (std::size_t k = 0; k < result.pattern.size(); ++k) {
      if (k > 0) {
        REQUIRE(result.retained_indices[k] > result.retained_indices[k - 1]);
      }
      const auto original = pattern.points[result.retained_indices[k]];
      REQUIRE(result.pattern.points[k].x == original.x);
      REQUIRE(result.pattern.points[k].y == original.y);
    }
  }
}

TEST_CASE("cell_owner basics") {
  const auto window = Window::square({2, 0}, 4.0);
  const auto pattern = make_pattern({{0, 0}, {4, 0}}, window);
  CHECK(geom::cell_owner(pattern, {1, 0}) == 0);
  CHECK(geom::cell_owner(pattern, {3, 0}) == 1);
  CHECK(geom::cell_owner(pattern, {2, 0}) == 0);  // equidistant: lower index

  const auto empty = make_pattern({}, window);
  CHECK_THROWS_AS(geom::cell_owner(empty, {0, 0}), InsufficientPointsError);
}

TEST_CASE("grid index agrees with the brute-force scan") {
  SUBCASE("random patterns, random queries") {
    for (int iter = 0; iter < 8; ++iter) {
      auto rng = test_stream(500 + iter);
      const auto window = iter % 2 == 0 ? Window::disk({0, 0}, 12.0) : Window::square({0, 0}, 12.0);
      const auto pattern = geom::sample_ppp(1.5, window, rng);
      REQUIRE(pattern.size() >= 64);  // make sure the grid path is in play
      const geom::NeighborIndex index(pattern);
      auto query_rng = test_stream(600 + iter);
      for (int k = 0; k < 125; ++k) {
        const Point2 q = window.sample(query_rng);
        CHECK(index.owner(q) == oracles::brute_force_owner(pattern, q));
        const auto fast = index.nearest_two(q);
        const auto slow = oracles::brute_force_nearest_two(pattern, q);
        CHECK(fast.index1 == slow.index1);
        CHECK(fast.index2 == slow.index2);
        CHECK(fast.r1 == slow.r1);
        CHECK(fast.r2 == slow.r2);
      }
    }
  }
  SUBCASE("lattice pattern with duplicates and exact ties") {
    const auto window = Window::square({0, 0}, 8.0);
    std::vector<Point2> points;
    for (int i = -8; i < 8; ++i) {
      for (int j = -8; j < 8; ++j) {
        points.push_back({static_cast<double>(i), static_cast<double>(j)});
      }
    }
    points.push_back({0.0, 0.0});  // duplicate point
    points.push_back({3.0, 3.0});
    const auto pattern = make_pattern(std::move(points), window);
    const geom::NeighborIndex index(pattern);
    // Midpoints of lattice edges and cell centers are exactly equidistant to
    // several points; both paths must resolve them identically.
    for (double x : {-0.5, 0.0, 0.5, 1.5, 3.0, 3.5}) {
      for (double y : {-0.5, 0.0, 0.5, 2.5, 3.0, 3.5}) {
        const Point2 q{x, y};
        CHECK(index.owner(q) == oracles::brute_force_owner(pattern, q));
        const auto fast = index.nearest_two(q);
        const auto slow = oracles::brute_force_nearest_two(pattern, q);
        CHECK(fast.index1 == slow.index1);
        CHECK(fast.index2 == slow.index2);
      }
    }
  }
}

TEST_CASE("sample_uniform_in_cell") {
  SUBCASE("single-point pattern accepts on the first attempt") {
    const auto window = Window::square({0, 0}, 2.0);
    const auto pattern = make_pattern({{0.5, 0.5}}, window);
    auto rng = test_stream(700);
    for (int i = 0; i < 200; ++i) {
      const auto q = geom::sample_uniform_in_cell(pattern, 0, rng, 1);  // one cell = whole window
      CHECK(window.contains(q));
    }
  }
  SUBCASE("two-point pattern: cell 0 is the left half-plane") {
    const auto window = Window::square({0, 0}, 2.0);
    const auto pattern = make_pattern({{-1, 0}, {1, 0}}, window);
    const geom::NeighborIndex index(pattern);
    auto rng = test_stream(701);
    int strictly_left = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const auto q = index.sample_uniform_in_cell(0, rng);
      REQUIRE(index.owner(q) == 0);  // acceptance condition re-checked post hoc
      REQUIRE(q.x <= 0.0);
      if (q.x < 0.0) {
        ++strictly_left;
      }
    }
    CHECK(strictly_left == n);  // the boundary x = 0 has probability zero
  }
  SUBCASE("exhausted attempts raise a sampling failure") {
    const auto window = Window::square({0, 0}, 2.0);
    const auto pattern = make_pattern({{-1, 0}, {1, 0}}, window);
    const geom::NeighborIndex index(pattern);
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
      auto rng = test_stream(800 + i);
      try {
        (void)index.sample_uniform_in_cell(1, rng, 1);
      } catch (const SamplingFailureError& e) {
        ++failures;
        CHECK(e.attempts() == 1);
      }
    }
    // with max_attempts = 1 roughly half the streams must fail
    CHECK(failures > 0);
    CHECK(failures < 50);
  }
  SUBCASE("invalid cell index") {
    const auto window = Window::square({0, 0}, 2.0);
    const auto pattern = make_pattern({{0, 0}}, window);
    auto rng = test_stream(900);
    CHECK_THROWS_AS(geom::sample_uniform_in_cell(pattern, 5, rng), std::invalid_argument);
  }
}
