#include "cellcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cellcov/errors.hpp"

namespace cellcov::geom {

namespace {

constexpr std::size_t kLinearScanCutoff = 64;
constexpr int kMaxGridCellsPerAxis = 4096;

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("retention probability must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

double distance(Point2 a, Point2 b) noexcept { return std::sqrt(squared_distance(a, b)); }

Window::Window(WindowShape shape, Point2 center, double extent)
    : shape_(shape), center_(center), extent_(extent) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("window extent must be positive and finite");
  }
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    throw std::invalid_argument("window center must be finite");
  }
}

Window Window::disk(Point2 center, double radius) { return Window(WindowShape::disk, center, radius); }

Window Window::square(Point2 center, double halfwidth) {
  return Window(WindowShape::square, center, halfwidth);
}

double Window::area() const noexcept {
  if (shape_ == WindowShape::disk) {
    return std::numbers::pi * extent_ * extent_;
  }
  return 4.0 * extent_ * extent_;
}

bool Window::contains(Point2 p) const noexcept {
  const double dx = p.x - center_.x;
  const double dy = p.y - center_.y;
  if (shape_ == WindowShape::disk) {
    return dx * dx + dy * dy <= extent_ * extent_;
  }
  return std::abs(dx) <= extent_ && std::abs(dy) <= extent_;
}

Point2 Window::sample(RngStream& rng) const noexcept {
  if (shape_ == WindowShape::disk) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform01();
    const double r = extent_ * std::sqrt(rng.uniform01());
    return {center_.x + r * std::cos(angle), center_.y + r * std::sin(angle)};
  }
  return {center_.x + extent_ * (2.0 * rng.uniform01() - 1.0),
          center_.y + extent_ * (2.0 * rng.uniform01() - 1.0)};
}

PointPattern sample_ppp(double lambda, const Window& window, RngStream& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("PPP intensity must be positive and finite");
  }
  const double mean = lambda * window.area();
  std::poisson_distribution<long long> count_dist(mean);
  const long long count = count_dist(rng);

  PointPattern pattern{{}, window, lambda};
  pattern.points.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    pattern.points.push_back(window.sample(rng));
  }
  return pattern;
}

ThinResult thin(const PointPattern& pattern, double p, RngStream& rng) {
  check_probability(p);
  ThinResult result{{{}, pattern.window, pattern.intensity * p}, {}};
  result.pattern.points.reserve(pattern.size());
  result.retained_indices.reserve(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (rng.uniform01() < p) {
      result.pattern.points.push_back(pattern.points[i]);
      result.retained_indices.push_back(i);
    }
  }
  return result;
}

ThinResult conditional_thin(const PointPattern& pattern, std::size_t keep_index, double p,
                            RngStream& rng) {
  check_probability(p);
  if (keep_index >= pattern.size()) {
    throw std::invalid_argument("conditional_thin: keep_index out of range");
  }
  ThinResult result{{{}, pattern.window, pattern.intensity * p}, {}};
  result.pattern.points.reserve(pattern.size());
  result.retained_indices.reserve(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (i == keep_index || rng.uniform01() < p) {
      result.pattern.points.push_back(pattern.points[i]);
      result.retained_indices.push_back(i);
    }
  }
  return result;
}

NeighborIndex::NeighborIndex(const PointPattern& pattern) : pattern_(&pattern) {
  const std::size_t n = pattern.size();
  if (n < kLinearScanCutoff) {
    return;  // linear_ stays true
  }

  const Point2 lo = pattern.window.min_corner();
  const Point2 hi = pattern.window.max_corner();
  const double density = static_cast<double>(n) / pattern.window.area();
  double h = 1.0 / std::sqrt(density);

  int nx = static_cast<int>(std::ceil((hi.x - lo.x) / h));
  int ny = static_cast<int>(std::ceil((hi.y - lo.y) / h));
  nx = std::clamp(nx, 1, kMaxGridCellsPerAxis);
  ny = std::clamp(ny, 1, kMaxGridCellsPerAxis);
  h = std::max((hi.x - lo.x) / nx, (hi.y - lo.y) / ny);

  linear_ = false;
  cell_size_ = h;
  x0_ = lo.x;
  y0_ = lo.y;
  nx_ = nx;
  ny_ = ny;

  const std::size_t ncells = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<std::uint32_t> cell_of(n);
  cell_start_.assign(ncells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = pattern.points[i];
    const int cx = std::clamp(static_cast<int>((p.x - x0_) / h), 0, nx - 1);
    const int cy = std::clamp(static_cast<int>((p.y - y0_) / h), 0, ny - 1);
    cell_of[i] = static_cast<std::uint32_t>(cy * nx + cx);
    ++cell_start_[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < ncells; ++c) {
    cell_start_[c + 1] += cell_start_[c];
  }
  cell_points_.resize(n);
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {  // ascending i keeps per-cell indices sorted
    cell_points_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }
}

void NeighborIndex::scan_cell(int cx, int cy, Point2 q, Best& first, Best& second) const {
  const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
  const auto begin = cell_start_[c];
  const auto end = cell_start_[c + 1];
  for (auto k = begin; k < end; ++k) {
    const std::size_t i = cell_points_[k];
    const double d2 = squared_distance(q, pattern_->points[i]);
    if (d2 < first.d2 || (d2 == first.d2 && i < first.index)) {
      second = first;
      first = {d2, i};
    } else if (d2 < second.d2 || (d2 == second.d2 && i < second.index)) {
      second = {d2, i};
    }
  }
}

void NeighborIndex::query(Point2 q, bool need_two, Best& first, Best& second) const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  first = {kInf, std::numeric_limits<std::size_t>::max()};
  second = first;

  if (linear_) {
    for (std::size_t i = 0; i < pattern_->size(); ++i) {
      const double d2 = squared_distance(q, pattern_->points[i]);
      if (d2 < first.d2 || (d2 == first.d2 && i < first.index)) {
        second = first;
        first = {d2, i};
      } else if (d2 < second.d2 || (d2 == second.d2 && i < second.index)) {
        second = {d2, i};
      }
    }
    return;
  }

  const int qx = std::clamp(static_cast<int>((q.x - x0_) / cell_size_), 0, nx_ - 1);
  const int qy = std::clamp(static_cast<int>((q.y - y0_) / cell_size_), 0, ny_ - 1);
  const int max_ring = std::max(std::max(qx, nx_ - 1 - qx), std::max(qy, ny_ - 1 - qy));

  for (int ring = 0; ring <= max_ring; ++ring) {
    const int xlo = std::max(qx - ring, 0);
    const int xhi = std::min(qx + ring, nx_ - 1);
    const int ylo = std::max(qy - ring, 0);
    const int yhi = std::min(qy + ring, ny_ - 1);
    if (ring == 0) {
      scan_cell(qx, qy, q, first, second);
    } else {
      if (qy - ring >= 0) {
        for (int cx = xlo; cx <= xhi; ++cx) scan_cell(cx, qy - ring, q, first, second);
      }
      if (qy + ring <= ny_ - 1) {
        for (int cx = xlo; cx <= xhi; ++cx) scan_cell(cx, qy + ring, q, first, second);
      }
      if (qx - ring >= 0) {
        for (int cy = std::max(ylo, qy - ring + 1); cy <= std::min(yhi, qy + ring - 1); ++cy) {
          scan_cell(qx - ring, cy, q, first, second);
        }
      }
      if (qx + ring <= nx_ - 1) {
        for (int cy = std::max(ylo, qy - ring + 1); cy <= std::min(yhi, qy + ring - 1); ++cy) {
          scan_cell(qx + ring, cy, q, first, second);
        }
      }
    }
    // Cells in ring r+1 and beyond are at least r * cell_size away from q.
    // The strict compare keeps tie-by-lower-index exact: on an exact tie we
    // keep scanning, just as a full linear pass would consider every point.
    const double reach = static_cast<double>(ring) * cell_size_;
    const double needed = need_two ? second.d2 : first.d2;
    if (needed < reach * reach) {
      break;
    }
  }
}

std::size_t NeighborIndex::owner(Point2 q) const {
  if (pattern_->empty()) {
    throw InsufficientPointsError("owner query on an empty pattern");
  }
  Best first{}, second{};
  query(q, false, first, second);
  return first.index;
}

NearestTwo NeighborIndex::nearest_two(Point2 q) const {
  if (pattern_->size() < 2) {
    throw InsufficientPointsError("nearest_two needs at least 2 points, pattern has " +
                                  std::to_string(pattern_->size()));
  }
  Best first{}, second{};
  query(q, true, first, second);
  return {first.index, second.index, std::sqrt(first.d2), std::sqrt(second.d2)};
}

Point2 NeighborIndex::sample_uniform_in_cell(std::size_t cell_index, RngStream& rng,
                                             std::uint64_t max_attempts) const {
  if (cell_index >= pattern_->size()) {
    throw std::invalid_argument("sample_uniform_in_cell: cell index out of range");
  }
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    const Point2 q = pattern_->window.sample(rng);
    if (owner(q) == cell_index) {
      return q;
    }
  }
  throw SamplingFailureError("rejection sampling exhausted " + std::to_string(max_attempts) +
                                 " attempts for cell " + std::to_string(cell_index),
                             max_attempts);
}

std::size_t cell_owner(const PointPattern& pattern, Point2 query) {
  return NeighborIndex(pattern).owner(query);
}

NearestTwo nearest_two(const PointPattern& pattern, Point2 origin) {
  return NeighborIndex(pattern).nearest_two(origin);
}

Point2 sample_uniform_in_cell(const PointPattern& pattern, std::size_t cell_index, RngStream& rng,
                              std::uint64_t max_attempts) {
  return NeighborIndex(pattern).sample_uniform_in_cell(cell_index, rng, max_attempts);
}

}  // namespace cellcov::geom
