#include "racer/ftg.hpp"

#include <algorithm>
#include <cmath>

#include "racer/errors.hpp"

namespace racer {
namespace {

constexpr double kMaxSteer = 0.434;
constexpr double kFullSpeedBelow = 0.2;  // radians of commanded steering
constexpr double kSpeedFalloff = 0.4;    // radians from full speed to stop

struct Run {
  int start = 0;
  int length = 0;
  double max_depth = 0.0;
  double center_angle = 0.0;
};

// Wider wins; ties go to the deeper run, then the more centered one, then
// the lower start index. The ordering mirrors cleanly because centers are
// compared by magnitude.
bool better(const Run& a, const Run& b) {
  if (a.length != b.length) return a.length > b.length;
  if (a.max_depth != b.max_depth) return a.max_depth > b.max_depth;
  const double ca = std::abs(a.center_angle), cb = std::abs(b.center_angle);
  if (ca != cb) return ca < cb;
  return a.start < b.start;
}

}  // namespace

Action ftg_control(const std::vector<double>& scan,
                   const std::vector<double>& angles,
                   const FtgConfig& config) {
  const int n = static_cast<int>(scan.size());
  if (n == 0 || scan.size() != angles.size())
    throw ConfigError("ftg scan and angle arrays must match and be non-empty");

  int nearest = 0;
  for (int i = 1; i < n; ++i)
    if (scan[i] < scan[nearest]) nearest = i;

  // A ray is free when it clears the threshold and its hit point lies
  // outside the safety bubble around the nearest hit (law of cosines).
  const double bubble_sq = config.bubble_radius * config.bubble_radius;
  const double dm = scan[nearest];
  std::vector<char> free_ray(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (scan[i] <= config.gap_threshold) continue;
    const double di = scan[i];
    const double sep_sq =
        di * di + dm * dm - 2.0 * di * dm * std::cos(angles[i] - angles[nearest]);
    free_ray[i] = sep_sq > bubble_sq;
  }

  Run best;
  bool found = false;
  for (int i = 0; i < n;) {
    if (!free_ray[i]) {
      ++i;
      continue;
    }
    Run run;
    run.start = i;
    run.max_depth = scan[i];
    while (i < n && free_ray[i]) {
      run.max_depth = std::max(run.max_depth, scan[i]);
      ++i;
    }
    run.length = i - run.start;
    // Endpoint-average keeps mirrored gaps at exactly opposite angles.
    run.center_angle =
        (angles[run.start] + angles[run.start + run.length - 1]) / 2.0;
    if (!found || better(run, best)) {
      best = run;
      found = true;
    }
  }
  if (!found) return Action{0.0, 0.0};

  Action action;
  action.steer =
      std::clamp(config.steering_gain * best.center_angle, -kMaxSteer, kMaxSteer);
  const double scale = std::clamp(
      1.0 - (std::abs(action.steer) - kFullSpeedBelow) / kSpeedFalloff, 0.0, 1.0);
  action.speed = config.max_speed * scale;
  return action;
}

}  // namespace racer
