#include "racer/track.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "racer/errors.hpp"
#include "racer/version.hpp"

namespace racer {
namespace {

constexpr double kMinWidth = 1.5;
constexpr double kMaxWidth = 3.5;

// Barry-Goldman centripetal Catmull-Rom evaluation on one segment.
Vec2 catmull_rom(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3,
                 double u) {
  const auto knot = [](const Vec2& a, const Vec2& b, double t_prev) {
    return t_prev + std::max(std::sqrt((b - a).norm()), 1e-6);
  };
  const double t0 = 0.0;
  const double t1 = knot(p0, p1, t0);
  const double t2 = knot(p1, p2, t1);
  const double t3 = knot(p2, p3, t2);
  const double t = t1 + u * (t2 - t1);

  const auto lerp = [](const Vec2& a, const Vec2& b, double ta, double tb,
                       double t) { return (tb - t) / (tb - ta) * a + (t - ta) / (tb - ta) * b; };
  const Vec2 a1 = lerp(p0, p1, t0, t1, t);
  const Vec2 a2 = lerp(p1, p2, t1, t2, t);
  const Vec2 a3 = lerp(p2, p3, t2, t3, t);
  const Vec2 b1 = lerp(a1, a2, t0, t2, t);
  const Vec2 b2 = lerp(a2, a3, t1, t3, t);
  return lerp(b1, b2, t1, t2, t);
}

// Non-adjacent segment pairs of a closed polyline (front() == back()) must
// not cross. AABB precheck keeps the quadratic scan cheap.
bool closed_polyline_self_intersects(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size()) - 1;  // segment count
  if (n < 4) return false;
  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes(n);
  for (int i = 0; i < n; ++i) {
    boxes[i] = {std::min(pts[i].x(), pts[i + 1].x()),
                std::max(pts[i].x(), pts[i + 1].x()),
                std::min(pts[i].y(), pts[i + 1].y()),
                std::max(pts[i].y(), pts[i + 1].y())};
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // wrap-adjacent
      if (boxes[i].x1 < boxes[j].x0 || boxes[j].x1 < boxes[i].x0 ||
          boxes[i].y1 < boxes[j].y0 || boxes[j].y1 < boxes[i].y0)
        continue;
      if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]))
        return true;
    }
  }
  return false;
}

bool polylines_cross(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    for (size_t j = 0; j + 1 < b.size(); ++j) {
      if (segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  return false;
}

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) len += (pts[i + 1] - pts[i]).norm();
  return len;
}

}  // namespace

Track Track::from_centerline(std::string id, std::vector<Vec2> points,
                             double width, int waypoint_stride) {
  if (points.size() < 8) throw Error("centerline needs at least 8 samples");
  if (width <= 0.0) throw InvalidWidth("track width must be positive");
  if (waypoint_stride < 1) throw Error("waypoint stride must be >= 1");

  Track t;
  t.id_ = std::move(id);
  t.width_ = width;
  const int n = static_cast<int>(points.size());

  // Offset walls along per-sample normals; left = CCW normal of the tangent.
  std::vector<Vec2> left(n), right(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& prev = points[(i + n - 1) % n];
    const Vec2& next = points[(i + 1) % n];
    Vec2 tan = next - prev;
    const double len = tan.norm();
    if (len < 1e-12) throw Error("degenerate centerline sample spacing");
    tan /= len;
    const Vec2 normal(-tan.y(), tan.x());
    left[i] = points[i] + 0.5 * width * normal;
    right[i] = points[i] - 0.5 * width * normal;
  }

  t.centerline_ = std::move(points);
  t.centerline_.push_back(t.centerline_.front());
  left.push_back(left.front());
  right.push_back(right.front());

  t.cum_length_.resize(n + 1);
  t.cum_length_[0] = 0.0;
  for (int i = 0; i < n; ++i)
    t.cum_length_[i + 1] =
        t.cum_length_[i] + (t.centerline_[i + 1] - t.centerline_[i]).norm();
  t.total_length_ = t.cum_length_[n];
  if (t.total_length_ <= 0.0) throw Error("zero-length centerline");

  if (closed_polyline_self_intersects(t.centerline_))
    throw SelfIntersectingTrack("centerline crosses itself: " + t.id_);
  if (closed_polyline_self_intersects(left) ||
      closed_polyline_self_intersects(right) || polylines_cross(left, right))
    throw SelfIntersectingTrack("wall offset crosses itself: " + t.id_ +
                                " width " + std::to_string(width));

  // Signed area decides which offset loop bounds the infield.
  double area2 = 0.0;
  for (int i = 0; i < n; ++i)
    area2 += cross2(t.centerline_[i], t.centerline_[i + 1]);
  if (area2 > 0.0) {  // CCW travel: interior on the left
    t.inner_wall_ = std::move(left);
    t.outer_wall_ = std::move(right);
  } else {
    t.inner_wall_ = std::move(right);
    t.outer_wall_ = std::move(left);
  }

  for (int i = 0; i < n; i += waypoint_stride) t.waypoint_idx_.push_back(i);
  if (t.waypoint_idx_.size() < 2)
    throw Error("too few waypoints for stride " + std::to_string(waypoint_stride));
  for (size_t w = 0; w + 1 < t.waypoint_idx_.size(); ++w) {
    const double gap = t.cum_length_[t.waypoint_idx_[w + 1]] -
                       t.cum_length_[t.waypoint_idx_[w]];
    if (gap <= 0.0 || gap > 1.0)
      throw Error("waypoint spacing out of range on " + t.id_);
  }
  const double wrap_gap = t.total_length_ - t.cum_length_[t.waypoint_idx_.back()];
  if (wrap_gap <= 0.0 || wrap_gap > 1.0)
    throw Error("waypoint wrap spacing out of range on " + t.id_);

  t.wall_segments_.reserve(2 * n);
  for (int i = 0; i < n; ++i)
    t.wall_segments_.push_back({t.inner_wall_[i], t.inner_wall_[i + 1]});
  for (int i = 0; i < n; ++i)
    t.wall_segments_.push_back({t.outer_wall_[i], t.outer_wall_[i + 1]});
  t.wall_grid_ = std::make_shared<SegmentGrid>(t.wall_segments_);
  return t;
}

Vec2 Track::waypoint_position(int w) const {
  return centerline_[waypoint_idx_.at(w)];
}

double Track::waypoint_arc(int w) const { return cum_length_[waypoint_idx_.at(w)]; }

double Track::waypoint_heading(int w) const {
  const int n = static_cast<int>(centerline_.size()) - 1;
  const int i = waypoint_idx_.at(w);
  const Vec2 d = centerline_[(i + 1) % n] - centerline_[(i + n - 1) % n];
  return std::atan2(d.y(), d.x());
}

Vec2 Track::point_at_arc(double s) const {
  const int n = static_cast<int>(centerline_.size()) - 1;
  s = std::fmod(s, total_length_);
  if (s < 0.0) s += total_length_;
  const auto it = std::upper_bound(cum_length_.begin(), cum_length_.end(), s);
  int i = std::clamp(static_cast<int>(it - cum_length_.begin()) - 1, 0, n - 1);
  const double seg_len = cum_length_[i + 1] - cum_length_[i];
  const double u = seg_len > 0.0 ? (s - cum_length_[i]) / seg_len : 0.0;
  return centerline_[i] + u * (centerline_[i + 1] - centerline_[i]);
}

double Track::heading_at_arc(double s) const {
  const int n = static_cast<int>(centerline_.size()) - 1;
  s = std::fmod(s, total_length_);
  if (s < 0.0) s += total_length_;
  const auto it = std::upper_bound(cum_length_.begin(), cum_length_.end(), s);
  int i = std::clamp(static_cast<int>(it - cum_length_.begin()) - 1, 0, n - 1);
  const Vec2 d = centerline_[(i + 1) % n] - centerline_[i];
  return std::atan2(d.y(), d.x());
}

TrackProjection Track::project(const Vec2& point) const {
  const int n = static_cast<int>(centerline_.size()) - 1;
  double best_sq = std::numeric_limits<double>::infinity();
  int best_i = 0;
  double best_t = 0.0;
  for (int i = 0; i < n; ++i) {
    double t;
    const double d2 = point_segment_sq_dist(point, centerline_[i],
                                            centerline_[i + 1], &t);
    if (d2 < best_sq) {
      best_sq = d2;
      best_i = i;
      best_t = t;
    }
  }
  const double dist = std::sqrt(best_sq);
  if (dist > 2.0 * width_)
    throw OffTrackQuery("query point " + std::to_string(dist) +
                        " m from centerline of " + id_);

  TrackProjection proj;
  proj.segment_index = best_i;
  const Vec2 a = centerline_[best_i];
  const Vec2 b = centerline_[best_i + 1];
  const Vec2 closest = a + best_t * (b - a);
  const double side = cross2(b - a, point - closest);
  proj.lateral_offset = side >= 0.0 ? dist : -dist;
  proj.arc_length = cum_length_[best_i] + best_t * (b - a).norm();
  if (proj.arc_length >= total_length_) proj.arc_length -= total_length_;
  return proj;
}

double Track::progress_delta(const TrackProjection& prev,
                             const TrackProjection& curr) const {
  double d = curr.arc_length - prev.arc_length;
  d -= total_length_ * std::round(d / total_length_);
  return d;
}

std::vector<Vec2> sample_closed_spline(const std::vector<Vec2>& control_points,
                                       double spacing, int count_multiple) {
  const int m = static_cast<int>(control_points.size());
  if (m < 4) throw Error("spline needs at least 4 control points");
  if (spacing <= 0.0) throw Error("spline sample spacing must be positive");
  if (count_multiple < 1) throw Error("count_multiple must be >= 1");

  constexpr int kDense = 256;  // per control segment
  std::vector<Vec2> dense;
  dense.reserve(static_cast<size_t>(m) * kDense);
  for (int i = 0; i < m; ++i) {
    const Vec2& p0 = control_points[(i + m - 1) % m];
    const Vec2& p1 = control_points[i];
    const Vec2& p2 = control_points[(i + 1) % m];
    const Vec2& p3 = control_points[(i + 2) % m];
    for (int k = 0; k < kDense; ++k)
      dense.push_back(catmull_rom(p0, p1, p2, p3, static_cast<double>(k) / kDense));
  }
  dense.push_back(dense.front());

  std::vector<double> cum(dense.size());
  cum[0] = 0.0;
  for (size_t i = 1; i < dense.size(); ++i)
    cum[i] = cum[i - 1] + (dense[i] - dense[i - 1]).norm();
  const double total = cum.back();
  if (total <= spacing) throw Error("spline too short for requested spacing");

  int count = static_cast<int>(std::ceil(total / spacing));
  count = (count + count_multiple - 1) / count_multiple * count_multiple;
  std::vector<Vec2> out;
  out.reserve(count);
  size_t j = 0;
  for (int k = 0; k < count; ++k) {
    const double s = total * k / count;
    while (j + 1 < cum.size() && cum[j + 1] < s) ++j;
    const double seg = cum[j + 1] - cum[j];
    const double u = seg > 0.0 ? (s - cum[j]) / seg : 0.0;
    out.push_back(dense[j] + u * (dense[j + 1] - dense[j]));
  }
  return out;
}

std::vector<Track> generate_track_family(const TrackSpec& spec) {
  if (spec.control_points.size() < 4)
    throw Error("track spec " + spec.id + " needs >= 4 control points");
  for (double w : spec.widths) {
    if (w < kMinWidth || w > kMaxWidth)
      throw InvalidWidth("width " + std::to_string(w) + " outside [" +
                         std::to_string(kMinWidth) + ", " +
                         std::to_string(kMaxWidth) + "]");
  }

  // 0.5 m waypoints on a 0.1 m centerline: five samples per waypoint gap.
  constexpr double kWaypointSpacing = 0.5;
  constexpr int kStride = 5;
  const std::vector<Vec2> fine = sample_closed_spline(
      spec.control_points, kWaypointSpacing / kStride, kStride);

  std::vector<Track> tracks;
  tracks.reserve(spec.widths.size());
  for (size_t k = 0; k < spec.widths.size(); ++k) {
    const std::string track_id =
        spec.id + "-w" + std::to_string(spec.widths[k]).substr(0, 4);
    tracks.push_back(
        Track::from_centerline(track_id, fine, spec.widths[k], kStride));
  }
  return tracks;
}

TrackSpec load_track_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open track spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("bad track spec " + path + ": " + e.what());
  }
  TrackSpec spec;
  spec.id = j.at("id").get<std::string>();
  for (const auto& p : j.at("control_points"))
    spec.control_points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  for (const auto& w : j.at("widths")) spec.widths.push_back(w.get<double>());
  return spec;
}

void save_track_spec(const TrackSpec& spec, const std::string& path) {
  nlohmann::json j;
  j["code_version"] = kCodeVersion;
  j["id"] = spec.id;
  auto& cps = j["control_points"] = nlohmann::json::array();
  for (const Vec2& p : spec.control_points) cps.push_back({p.x(), p.y()});
  j["widths"] = spec.widths;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write track spec: " + path);
  out << j.dump(2) << '\n';
}

void save_track_cache(const Track& track, const std::string& path) {
  nlohmann::json j;
  j["code_version"] = kCodeVersion;
  j["id"] = track.id();
  j["width"] = track.width();
  j["total_length"] = track.total_length();
  const auto dump_poly = [](const std::vector<Vec2>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vec2& p : pts) arr.push_back({p.x(), p.y()});
    return arr;
  };
  j["centerline"] = dump_poly(track.centerline());
  j["inner_wall"] = dump_poly(track.inner_wall());
  j["outer_wall"] = dump_poly(track.outer_wall());
  j["waypoint_indices"] = track.waypoint_indices();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write track cache: " + path);
  out << j.dump() << '\n';
}

}  // namespace racer
