#ifndef RACER_VEHICLE_HPP
#define RACER_VEHICLE_HPP

#include <deque>

#include "racer/geometry.hpp"

namespace racer {

/// Kinematic bicycle parameters. Defaults model a 1/10-scale platform.
struct VehicleParams {
  double wheelbase = 0.325;      // meters, rear to front axle
  double body_length = 0.5;      // collision footprint
  double body_width = 0.3;
  double max_speed = 2.0;        // m/s, commanded speed ceiling
  double max_accel = 3.0;        // m/s^2 toward the commanded speed
  double max_steer = 0.434;      // radians
  double steering_rate = 3.2;    // rad/s toward the commanded angle
  int command_delay = 1;         // control steps before a command takes effect
  double control_period = 0.1;   // seconds per control step
  int substeps = 10;             // integrator substeps per control step
};

/// Commanded setpoints, tracked by the actuator model.
struct Action {
  double speed = 0.0;
  double steer = 0.0;
};

/// Pose is the rear-axle center; the body extends forward from it.
struct VehicleState {
  Vec2 position{0.0, 0.0};
  double heading = 0.0;   // radians, world frame
  double speed = 0.0;     // m/s along the heading
  double steering = 0.0;  // current front-wheel angle, radians
};

/// Advances one control period: the speed and steering track the action
/// setpoints under rate limits while the bicycle pose integrates at the
/// substep resolution.
VehicleState step_vehicle(const VehicleState& state, const Action& action,
                          const VehicleParams& params);

/// Collision footprint for a state under the given dimensions.
OrientedRect vehicle_footprint(const VehicleState& state,
                               const VehicleParams& params);

/// A vehicle with its actuation delay line. Commands are clamped to the
/// actuator range when issued and take effect `command_delay` steps later.
class Vehicle {
 public:
  Vehicle(const VehicleParams& params, const VehicleState& spawn);

  /// Queues a command and advances one control period.
  void step(const Action& commanded);

  const VehicleState& state() const { return state_; }
  const VehicleParams& params() const { return params_; }
  OrientedRect footprint() const { return vehicle_footprint(state_, params_); }

 private:
  VehicleParams params_;
  VehicleState state_;
  std::deque<Action> pending_;  // front is the next action to take effect
};

}  // namespace racer

#endif  // RACER_VEHICLE_HPP
