#include "racer/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace racer {
namespace {

double move_toward(double value, double target, double max_step) {
  return value + std::clamp(target - value, -max_step, max_step);
}

}  // namespace

VehicleState step_vehicle(const VehicleState& state, const Action& action,
                          const VehicleParams& params) {
  VehicleState s = state;
  const double dt = params.control_period / params.substeps;
  for (int k = 0; k < params.substeps; ++k) {
    s.speed = move_toward(s.speed, action.speed, params.max_accel * dt);
    s.steering = move_toward(s.steering, action.steer, params.steering_rate * dt);
    s.position.x() += s.speed * std::cos(s.heading) * dt;
    s.position.y() += s.speed * std::sin(s.heading) * dt;
    s.heading = wrap_angle(
        s.heading + s.speed / params.wheelbase * std::tan(s.steering) * dt);
  }
  return s;
}

OrientedRect vehicle_footprint(const VehicleState& state,
                               const VehicleParams& params) {
  const Vec2 forward(std::cos(state.heading), std::sin(state.heading));
  return {state.position + 0.5 * params.wheelbase * forward, state.heading,
          0.5 * params.body_length, 0.5 * params.body_width};
}

Vehicle::Vehicle(const VehicleParams& params, const VehicleState& spawn)
    : params_(params), state_(spawn) {
  // The delay line starts full of null commands so the first real command
  // takes effect exactly command_delay steps after it is issued.
  pending_.assign(static_cast<size_t>(params_.command_delay), Action{});
}

void Vehicle::step(const Action& commanded) {
  Action clamped;
  clamped.speed = std::clamp(commanded.speed, 0.0, params_.max_speed);
  clamped.steer =
      std::clamp(commanded.steer, -params_.max_steer, params_.max_steer);
  pending_.push_back(clamped);
  const Action effective = pending_.front();
  pending_.pop_front();
  state_ = step_vehicle(state_, effective, params_);
}

}  // namespace racer
