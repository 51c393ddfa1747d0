#include "racer/lidar.hpp"

#include <cmath>

#include "racer/errors.hpp"

namespace racer {

Lidar::Lidar(const LidarConfig& config) : config_(config) {
  if (config_.ray_count < 2) throw ConfigError("lidar needs at least 2 rays");
  if (config_.sector_count < 1 ||
      config_.ray_count % config_.sector_count != 0) {
    throw IndivisibleRayCount(
        "ray count " + std::to_string(config_.ray_count) +
        " not divisible into " + std::to_string(config_.sector_count) +
        " sectors");
  }
  angles_.reserve(config_.ray_count);
  const double half = (config_.ray_count - 1) / 2.0;
  const double step = config_.fov / (config_.ray_count - 1);
  for (int i = 0; i < config_.ray_count; ++i)
    angles_.push_back((i - half) * step);
}

void Lidar::scan_into(const Vec2& origin, double heading,
                      const SegmentGrid& walls,
                      const std::vector<OrientedRect>& bodies,
                      std::vector<double>& out) const {
  out.resize(angles_.size());
  for (size_t i = 0; i < angles_.size(); ++i) {
    const double a = heading + angles_[i];
    const Vec2 dir(std::cos(a), std::sin(a));
    double best = walls.raycast(origin, dir, config_.max_range);
    for (const OrientedRect& body : bodies) {
      const double t = ray_rect_distance(origin, dir, body);
      if (t >= 0.0 && t < best) best = t;
    }
    out[i] = std::min(best, config_.max_range);
  }
}

std::vector<double> Lidar::scan(const Vec2& origin, double heading,
                                const SegmentGrid& walls,
                                const std::vector<OrientedRect>& bodies) const {
  std::vector<double> out;
  scan_into(origin, heading, walls, bodies, out);
  return out;
}

std::vector<double> average_filter(const std::vector<double>& scan,
                                   int sector_count) {
  if (sector_count < 1 ||
      scan.size() % static_cast<size_t>(sector_count) != 0) {
    throw IndivisibleRayCount("scan of " + std::to_string(scan.size()) +
                              " rays not divisible into " +
                              std::to_string(sector_count) + " sectors");
  }
  const size_t block = scan.size() / sector_count;
  std::vector<double> sectors(sector_count);
  for (int s = 0; s < sector_count; ++s) {
    double sum = 0.0;
    for (size_t i = s * block; i < (s + 1) * block; ++i) sum += scan[i];
    sectors[s] = sum / static_cast<double>(block);
  }
  return sectors;
}

}  // namespace racer
