#include "racer/segment_grid.hpp"

#include <algorithm>
#include <cmath>

namespace racer {

SegmentGrid::SegmentGrid(std::vector<Segment> segments, double cell_size)
    : segments_(std::move(segments)), cell_(cell_size) {
  if (segments_.empty()) return;

  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = max_x;
  min_x_ = std::numeric_limits<double>::infinity();
  min_y_ = min_x_;
  for (const Segment& s : segments_) {
    min_x_ = std::min({min_x_, s.a.x(), s.b.x()});
    min_y_ = std::min({min_y_, s.a.y(), s.b.y()});
    max_x = std::max({max_x, s.a.x(), s.b.x()});
    max_y = std::max({max_y, s.a.y(), s.b.y()});
  }
  // Pad so boundary segments never land outside the last cell.
  min_x_ -= 0.5 * cell_;
  min_y_ -= 0.5 * cell_;
  max_x += 0.5 * cell_;
  max_y += 0.5 * cell_;
  nx_ = std::max(1, static_cast<int>(std::ceil((max_x - min_x_) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((max_y - min_y_) / cell_)));

  const auto clamp_ix = [this](int v) { return std::clamp(v, 0, nx_ - 1); };
  const auto clamp_iy = [this](int v) { return std::clamp(v, 0, ny_ - 1); };

  std::vector<std::int32_t> counts(static_cast<size_t>(nx_) * ny_ + 1, 0);
  const auto for_each_cell = [&](const Segment& s, auto&& fn) {
    const int x0 = clamp_ix(static_cast<int>((std::min(s.a.x(), s.b.x()) - min_x_) / cell_));
    const int x1 = clamp_ix(static_cast<int>((std::max(s.a.x(), s.b.x()) - min_x_) / cell_));
    const int y0 = clamp_iy(static_cast<int>((std::min(s.a.y(), s.b.y()) - min_y_) / cell_));
    const int y1 = clamp_iy(static_cast<int>((std::max(s.a.y(), s.b.y()) - min_y_) / cell_));
    for (int iy = y0; iy <= y1; ++iy)
      for (int ix = x0; ix <= x1; ++ix) fn(cell_index(ix, iy));
  };

  for (const Segment& s : segments_)
    for_each_cell(s, [&](int c) { ++counts[c + 1]; });
  for (size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  cell_start_ = counts;
  cell_items_.resize(cell_start_.back());
  std::vector<std::int32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(segments_.size()); ++i)
    for_each_cell(segments_[i], [&](int c) { cell_items_[cursor[c]++] = i; });
}

double SegmentGrid::raycast(const Vec2& origin, const Vec2& dir,
                            double max_range) const {
  double best = std::numeric_limits<double>::infinity();
  if (segments_.empty()) return best;

  // Clip the ray to the grid bounds to find the starting parameter.
  const double w = nx_ * cell_, h = ny_ * cell_;
  double t0 = 0.0, t1 = max_range;
  const double lo[2] = {min_x_, min_y_};
  const double hi[2] = {min_x_ + w, min_y_ + h};
  for (int k = 0; k < 2; ++k) {
    if (dir[k] == 0.0) {
      if (origin[k] < lo[k] || origin[k] > hi[k]) return best;
    } else {
      double ta = (lo[k] - origin[k]) / dir[k];
      double tb = (hi[k] - origin[k]) / dir[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return best;
    }
  }

  const Vec2 start = origin + t0 * dir;
  int ix = std::clamp(static_cast<int>((start.x() - min_x_) / cell_), 0, nx_ - 1);
  int iy = std::clamp(static_cast<int>((start.y() - min_y_) / cell_), 0, ny_ - 1);

  const int step_x = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_y = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  // Absolute ray parameter at which the next x/y cell boundary is crossed.
  double t_max_x = inf, t_max_y = inf;
  double t_dx = inf, t_dy = inf;
  if (step_x != 0) {
    const double next = min_x_ + (ix + (step_x > 0 ? 1 : 0)) * cell_;
    t_max_x = (next - origin.x()) / dir.x();
    t_dx = cell_ / std::abs(dir.x());
  }
  if (step_y != 0) {
    const double next = min_y_ + (iy + (step_y > 0 ? 1 : 0)) * cell_;
    t_max_y = (next - origin.y()) / dir.y();
    t_dy = cell_ / std::abs(dir.y());
  }

  for (;;) {
    const int c = cell_index(ix, iy);
    for (std::int32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const double t = ray_segment_distance(origin, dir, segments_[cell_items_[k]]);
      if (t > 0.0 && t < best) best = t;
    }
    const double t_next = std::min(t_max_x, t_max_y);
    if (best <= t_next || t_next > t1) break;
    if (t_max_x <= t_max_y) {
      ix += step_x;
      if (ix < 0 || ix >= nx_) break;
      t_max_x += t_dx;
    } else {
      iy += step_y;
      if (iy < 0 || iy >= ny_) break;
      t_max_y += t_dy;
    }
  }
  return best <= max_range ? best : std::numeric_limits<double>::infinity();
}

}  // namespace racer
