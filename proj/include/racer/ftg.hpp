#ifndef RACER_FTG_HPP
#define RACER_FTG_HPP

#include <vector>

#include "racer/vehicle.hpp"

namespace racer {

struct FtgConfig {
  double bubble_radius = 0.4;   // meters cleared around the nearest hit
  double gap_threshold = 1.2;   // meters a ray must exceed to be free
  double max_speed = 1.5;       // m/s cruise ceiling
  double steering_gain = 1.0;
};

/// Follow-the-gap controller over a raw range scan. angles[i] is ray i's
/// direction relative to the heading. Steers toward the center of the
/// widest free gap after masking a safety bubble around the nearest hit;
/// returns a zero action when every gap is closed (blocked).
Action ftg_control(const std::vector<double>& scan,
                   const std::vector<double>& angles, const FtgConfig& config);

}  // namespace racer

#endif  // RACER_FTG_HPP
