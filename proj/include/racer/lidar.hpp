#ifndef RACER_LIDAR_HPP
#define RACER_LIDAR_HPP

#include <numbers>
#include <vector>

#include "racer/geometry.hpp"
#include "racer/segment_grid.hpp"

namespace racer {

struct LidarConfig {
  int ray_count = 1080;
  double fov = 1.5 * std::numbers::pi;  // 270 degree sweep
  double max_range = 10.0;              // meters, also the saturation value
  int sector_count = 10;                // averaged output channels
};

/// Planar range scanner. Ray i points at relative angle
/// (i - (R-1)/2) * fov / (R-1), so the sweep is symmetric about the heading
/// and angle i mirrors angle R-1-i exactly in floating point. Ray 0 points
/// to the right of travel (negative angles), the last ray to the left.
class Lidar {
 public:
  explicit Lidar(const LidarConfig& config);

  const LidarConfig& config() const { return config_; }
  const std::vector<double>& relative_angles() const { return angles_; }

  /// Casts all rays from the pose against the wall grid and the given
  /// bodies. Writes one distance per ray, saturated at max_range. The
  /// caller must exclude the sensing vehicle's own body.
  void scan_into(const Vec2& origin, double heading, const SegmentGrid& walls,
                 const std::vector<OrientedRect>& bodies,
                 std::vector<double>& out) const;

  std::vector<double> scan(const Vec2& origin, double heading,
                           const SegmentGrid& walls,
                           const std::vector<OrientedRect>& bodies) const;

 private:
  LidarConfig config_;
  std::vector<double> angles_;
};

/// Means over equal contiguous ray blocks, in ray order. Throws
/// IndivisibleRayCount unless scan.size() is a multiple of sector_count.
std::vector<double> average_filter(const std::vector<double>& scan,
                                   int sector_count);

}  // namespace racer

#endif  // RACER_LIDAR_HPP
