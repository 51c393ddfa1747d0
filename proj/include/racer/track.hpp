#ifndef RACER_TRACK_HPP
#define RACER_TRACK_HPP

#include <memory>
#include <string>
#include <vector>

#include "racer/geometry.hpp"
#include "racer/segment_grid.hpp"

namespace racer {

/// Result of projecting a point onto a track centerline.
struct TrackProjection {
  double arc_length = 0.0;      // meters from waypoint 0, in [0, total_length)
  double lateral_offset = 0.0;  // signed meters, positive = left of travel
  int segment_index = 0;
};

/// Control points and extrusion widths for one authored track shape.
struct TrackSpec {
  std::string id;
  std::vector<Vec2> control_points;
  std::vector<double> widths;
};

/// Closed centerline with offset walls and arc-length bookkeeping. Immutable
/// after construction; safe to share across episode workers.
class Track {
 public:
  /// Builds a track from an open ring of centerline samples (the closing
  /// point is appended internally). Waypoints are taken every
  /// `waypoint_stride` samples. Throws SelfIntersectingTrack when the
  /// centerline or either offset wall crosses itself.
  static Track from_centerline(std::string id, std::vector<Vec2> points,
                               double width, int waypoint_stride);

  const std::string& id() const { return id_; }
  double width() const { return width_; }
  double total_length() const { return total_length_; }

  /// Closed polyline: front() == back().
  const std::vector<Vec2>& centerline() const { return centerline_; }
  const std::vector<Vec2>& inner_wall() const { return inner_wall_; }
  const std::vector<Vec2>& outer_wall() const { return outer_wall_; }
  const std::vector<int>& waypoint_indices() const { return waypoint_idx_; }

  int waypoint_count() const { return static_cast<int>(waypoint_idx_.size()); }
  Vec2 waypoint_position(int w) const;
  double waypoint_arc(int w) const;
  /// Centerline tangent angle at waypoint w (radians).
  double waypoint_heading(int w) const;

  Vec2 point_at_arc(double s) const;
  double heading_at_arc(double s) const;

  /// Nearest-point projection of `point` onto the centerline. Ties between
  /// equidistant segments go to the lower segment index. Throws OffTrackQuery
  /// when the point is farther than 2*width from the centerline.
  TrackProjection project(const Vec2& point) const;

  /// Signed forward arc-length difference, unwrapped across the start line:
  /// differences beyond total_length/2 wrap around.
  double progress_delta(const TrackProjection& prev,
                        const TrackProjection& curr) const;

  /// Both walls flattened to segments, in wall order.
  const std::vector<Segment>& wall_segments() const { return wall_segments_; }
  const SegmentGrid& wall_grid() const { return *wall_grid_; }

 private:
  Track() = default;

  std::string id_;
  double width_ = 0.0;
  double total_length_ = 0.0;
  std::vector<Vec2> centerline_;  // closed, size n+1
  std::vector<Vec2> inner_wall_;
  std::vector<Vec2> outer_wall_;
  std::vector<int> waypoint_idx_;
  std::vector<double> cum_length_;  // size n+1, cum_length_[n] == total_length_
  std::vector<Segment> wall_segments_;
  std::shared_ptr<const SegmentGrid> wall_grid_;
};

/// Samples a closed centripetal Catmull-Rom spline through the control
/// points, resampled to uniform arc-length spacing. `spacing` is the target
/// centerline sample spacing in meters; the sample count is rounded up to a
/// multiple of `count_multiple`.
std::vector<Vec2> sample_closed_spline(const std::vector<Vec2>& control_points,
                                       double spacing, int count_multiple = 1);

/// One Track per width, all sharing the same resampled centerline. Throws
/// InvalidWidth for widths outside [1.5, 3.5] and SelfIntersectingTrack when
/// offsetting produces crossings.
std::vector<Track> generate_track_family(const TrackSpec& spec);

/// JSON (de)serialization of track definition files:
/// {"id": ..., "control_points": [[x,y],...], "widths": [...]}.
TrackSpec load_track_spec(const std::string& path);
void save_track_spec(const TrackSpec& spec, const std::string& path);

/// Writes generated geometry (centerline, waypoints, walls) for inspection.
void save_track_cache(const Track& track, const std::string& path);

}  // namespace racer

#endif  // RACER_TRACK_HPP
