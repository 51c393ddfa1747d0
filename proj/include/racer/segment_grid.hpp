#ifndef RACER_SEGMENT_GRID_HPP
#define RACER_SEGMENT_GRID_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "racer/geometry.hpp"

namespace racer {

/// Uniform grid over static segments with DDA ray traversal. Cells hold
/// segment indices by conservative AABB overlap, so a ray can test a segment
/// twice but never misses one.
class SegmentGrid {
 public:
  SegmentGrid() = default;
  SegmentGrid(std::vector<Segment> segments, double cell_size = 0.5);

  /// Distance to the nearest segment hit along the ray, or +infinity when
  /// nothing is hit within max_range.
  double raycast(const Vec2& origin, const Vec2& dir, double max_range) const;

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

 private:
  int cell_index(int ix, int iy) const { return iy * nx_ + ix; }

  std::vector<Segment> segments_;
  double cell_ = 0.5;
  double min_x_ = 0.0, min_y_ = 0.0;
  int nx_ = 0, ny_ = 0;
  // CSR layout: cell_start_ has nx*ny+1 entries into cell_items_.
  std::vector<std::int32_t> cell_start_;
  std::vector<std::int32_t> cell_items_;
};

}  // namespace racer

#endif  // RACER_SEGMENT_GRID_HPP
