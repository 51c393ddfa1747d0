#ifndef RACER_GEOMETRY_HPP
#define RACER_GEOMETRY_HPP

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace racer {

using Vec2 = Eigen::Vector2d;

struct Segment {
  Vec2 a;
  Vec2 b;
};

inline double cross2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

/// Distance along a ray (origin, unit dir) to a segment, or a negative
/// value when the ray misses. Hits at t <= 0 are ignored.
inline double ray_segment_distance(const Vec2& origin, const Vec2& dir,
                                   const Segment& seg) {
  const Vec2 e = seg.b - seg.a;
  const double denom = cross2(dir, e);
  if (denom == 0.0) return -1.0;  // parallel
  const Vec2 ao = seg.a - origin;
  const double t = cross2(ao, e) / denom;
  const double u = cross2(ao, dir) / denom;
  if (t <= 0.0 || u < 0.0 || u > 1.0) return -1.0;
  return t;
}

/// True when segments pq and rs intersect (touching counts).
inline bool segments_intersect(const Vec2& p, const Vec2& q, const Vec2& r,
                               const Vec2& s) {
  const auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross2(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
  };
  const int o1 = orient(p, q, r);
  const int o2 = orient(p, q, s);
  const int o3 = orient(r, s, p);
  const int o4 = orient(r, s, q);
  if (o1 != o2 && o3 != o4) return true;

  const auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  if (o1 == 0 && on_segment(p, q, r)) return true;
  if (o2 == 0 && on_segment(p, q, s)) return true;
  if (o3 == 0 && on_segment(r, s, p)) return true;
  if (o4 == 0 && on_segment(r, s, q)) return true;
  return false;
}

/// Squared distance from point to segment, with the closest parameter in [0,1].
inline double point_segment_sq_dist(const Vec2& p, const Vec2& a, const Vec2& b,
                                    double* t_out = nullptr) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) {
    t = (p - a).dot(e) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  if (t_out) *t_out = t;
  return (a + t * e - p).squaredNorm();
}

/// Oriented rectangle used for vehicle footprints.
struct OrientedRect {
  Vec2 center{0.0, 0.0};
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  /// Corners in CCW order: front-left, rear-left, rear-right, front-right.
  std::array<Vec2, 4> corners() const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const auto to_world = [&](double x, double y) {
      return Vec2(center.x() + c * x - s * y, center.y() + s * x + c * y);
    };
    return {to_world(half_length, half_width),
            to_world(-half_length, half_width),
            to_world(-half_length, -half_width),
            to_world(half_length, -half_width)};
  }

  std::array<Segment, 4> edges() const {
    const auto cs = corners();
    return {Segment{cs[0], cs[1]}, Segment{cs[1], cs[2]},
            Segment{cs[2], cs[3]}, Segment{cs[3], cs[0]}};
  }
};

/// Separating-axis test for two oriented rectangles. Touching counts as
/// intersecting.
inline bool rects_intersect(const OrientedRect& r1, const OrientedRect& r2) {
  const auto c1 = r1.corners();
  const auto c2 = r2.corners();
  const std::array<Vec2, 4> axes = {
      Vec2(std::cos(r1.heading), std::sin(r1.heading)),
      Vec2(-std::sin(r1.heading), std::cos(r1.heading)),
      Vec2(std::cos(r2.heading), std::sin(r2.heading)),
      Vec2(-std::sin(r2.heading), std::cos(r2.heading))};
  for (const Vec2& axis : axes) {
    double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
    double min2 = min1, max2 = max1;
    for (int i = 0; i < 4; ++i) {
      const double p1 = axis.dot(c1[i]);
      const double p2 = axis.dot(c2[i]);
      min1 = std::min(min1, p1);
      max1 = std::max(max1, p1);
      min2 = std::min(min2, p2);
      max2 = std::max(max2, p2);
    }
    if (max1 < min2 || max2 < min1) return false;
  }
  return true;
}

/// True when the segment touches or crosses the rectangle, including the
/// fully-contained case. Slab clipping in the rectangle frame.
inline bool rect_intersects_segment(const OrientedRect& r, const Vec2& a,
                                    const Vec2& b) {
  const double c = std::cos(r.heading);
  const double s = std::sin(r.heading);
  const auto to_local = [&](const Vec2& p) {
    const Vec2 d = p - r.center;
    return Vec2(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
  };
  const Vec2 p0 = to_local(a);
  const Vec2 p1 = to_local(b);
  const Vec2 d = p1 - p0;
  double t0 = 0.0, t1 = 1.0;
  const double lo[2] = {-r.half_length, -r.half_width};
  const double hi[2] = {r.half_length, r.half_width};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (p0[k] < lo[k] || p0[k] > hi[k]) return false;
    } else {
      double ta = (lo[k] - p0[k]) / d[k];
      double tb = (hi[k] - p0[k]) / d[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

/// Distance along the unit ray to the rectangle, or -1 on a miss. A ray
/// starting inside reports 0.
inline double ray_rect_distance(const Vec2& origin, const Vec2& dir,
                                const OrientedRect& r) {
  const double c = std::cos(r.heading);
  const double s = std::sin(r.heading);
  const Vec2 rel = origin - r.center;
  const Vec2 p0(c * rel.x() + s * rel.y(), -s * rel.x() + c * rel.y());
  const Vec2 d(c * dir.x() + s * dir.y(), -s * dir.x() + c * dir.y());
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const double lo[2] = {-r.half_length, -r.half_width};
  const double hi[2] = {r.half_length, r.half_width};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (p0[k] < lo[k] || p0[k] > hi[k]) return -1.0;
    } else {
      double ta = (lo[k] - p0[k]) / d[k];
      double tb = (hi[k] - p0[k]) / d[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return -1.0;
    }
  }
  return t0;
}

}  // namespace racer

#endif  // RACER_GEOMETRY_HPP
