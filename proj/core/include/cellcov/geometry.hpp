#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cellcov/rng.hpp"

namespace cellcov::geom {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point2 a, Point2 b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point2 a, Point2 b) noexcept;

enum class WindowShape { disk, square };

/// Finite observation region: a disk or an axis-aligned square.
class Window {
 public:
  static Window disk(Point2 center, double radius);
  static Window square(Point2 center, double halfwidth);

  WindowShape shape() const noexcept { return shape_; }
  Point2 center() const noexcept { return center_; }
  /// Disk radius, or half the square's side.
  double extent() const noexcept { return extent_; }

  double area() const noexcept;
  bool contains(Point2 p) const noexcept;
  Point2 sample(RngStream& rng) const noexcept;

  Point2 min_corner() const noexcept { return {center_.x - extent_, center_.y - extent_}; }
  Point2 max_corner() const noexcept { return {center_.x + extent_, center_.y + extent_}; }

 private:
  Window(WindowShape shape, Point2 center, double extent);

  WindowShape shape_;
  Point2 center_;
  double extent_;
};

/// A finite planar point set with the window it was generated on.
/// Points keep their generation order, so indices are stable.
struct PointPattern {
  std::vector<Point2> points;
  Window window;
  double intensity = 0.0;  // points per unit area of the generating process

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Homogeneous Poisson sample on `window`: the count is Poisson(lambda * area)
/// and, given the count, points are i.i.d. uniform.
PointPattern sample_ppp(double lambda, const Window& window, RngStream& rng);

struct ThinResult {
  PointPattern pattern;
  std::vector<std::size_t> retained_indices;  // output position -> input index
};

/// Independent thinning: each point is kept with probability p.
ThinResult thin(const PointPattern& pattern, double p, RngStream& rng);

/// Independent thinning with one exempt point: `keep_index` is always
/// retained, every other point survives with probability p.
ThinResult conditional_thin(const PointPattern& pattern, std::size_t keep_index, double p,
                            RngStream& rng);

struct NearestTwo {
  std::size_t index1 = 0;
  std::size_t index2 = 0;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Exact nearest-neighbor queries over a point pattern.
///
/// Backed by a uniform grid with cell size ~ 1/sqrt(density); queries expand
/// rings of cells until no unvisited cell can hold a closer point, so results
/// match a full linear scan exactly, including the tie rule (equal distances
/// resolve to the lower point index). Patterns below 64 points use a plain
/// linear scan. The pattern must outlive the index.
class NeighborIndex {
 public:
  explicit NeighborIndex(const PointPattern& pattern);

  const PointPattern& pattern() const noexcept { return *pattern_; }

  /// Index of the closest point to `q` (the Voronoi cell that contains `q`).
  std::size_t owner(Point2 q) const;

  /// Closest and second closest point to `q`.
  NearestTwo nearest_two(Point2 q) const;

  /// Uniform draw on the intersection of cell `cell_index` with the window,
  /// by rejection: propose uniformly on the window, accept when the proposal
  /// falls in the cell. Throws SamplingFailureError after `max_attempts`.
  Point2 sample_uniform_in_cell(std::size_t cell_index, RngStream& rng,
                                std::uint64_t max_attempts = 1000000) const;

 private:
  struct Best {
    double d2;
    std::size_t index;
  };

  void scan_cell(int cx, int cy, Point2 q, Best& first, Best& second) const;
  void query(Point2 q, bool need_two, Best& first, Best& second) const;

  const PointPattern* pattern_;
  bool linear_ = true;
  double cell_size_ = 0.0;
  double x0_ = 0.0, y0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint32_t> cell_start_;   // CSR offsets, size nx*ny + 1
  std::vector<std::uint32_t> cell_points_;  // point indices, ascending per cell
};

/// One-shot conveniences; each builds a NeighborIndex internally.
std::size_t cell_owner(const PointPattern& pattern, Point2 query);
NearestTwo nearest_two(const PointPattern& pattern, Point2 origin);
Point2 sample_uniform_in_cell(const PointPattern& pattern, std::size_t cell_index, RngStream& rng,
                              std::uint64_t max_attempts = 1000000);

}  // namespace cellcov::geom
