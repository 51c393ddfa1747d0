#ifndef RACER_REWARD_HPP
#define RACER_REWARD_HPP

#include <algorithm>
#include <cmath>

namespace racer {

struct RewardConfig {
  double w_obstacle = 0.7;
  double w_steer = 0.3;
  double collision_penalty = 25.0;
  double steer_k = 15.0;
  double steer_x0 = 0.3;     // radians of per-step steering change
  double obstacle_k = 35.0;
  double obstacle_x0 = 0.5;  // meters to the nearest obstacle
};

/// Per-step reward terms. total is always the exact composition
/// r_progress * (1 - w_o * p_obstacle - w_s * p_steer) - collision penalty.
struct RewardBreakdown {
  double r_progress = 0.0;
  double p_obstacle = 0.0;
  double p_steer = 0.0;
  bool collision = false;
  double total = 0.0;
};

/// Rises from ~0 for smooth steering to 1 past the excess threshold;
/// exactly 0.5 at steer_x0.
inline double steering_penalty(double delta_steer, const RewardConfig& c) {
  const double z = c.steer_k * (std::abs(delta_steer) - c.steer_x0);
  return 1.0 / (1.0 + std::exp(-z));
}

/// Rises toward 1 as the nearest obstacle closes in; exactly 0.5 at
/// obstacle_x0 and ~0 in open space. Computed as 1/(1+e^z) rather than
/// 1 - 1/(1+e^-z) so the far tail keeps full relative precision and
/// stays strictly monotone.
inline double obstacle_penalty(double min_distance, const RewardConfig& c) {
  const double z = c.obstacle_k * (min_distance - c.obstacle_x0);
  return 1.0 / (1.0 + std::exp(z));
}

/// Progress earns reward scaled down by the active penalties; a collision
/// subtracts the fixed penalty on top. Backward motion earns nothing.
inline RewardBreakdown step_reward(double progress, double p_obstacle,
                                   double p_steer, bool collided,
                                   const RewardConfig& c) {
  RewardBreakdown b;
  b.r_progress = std::max(progress, 0.0);
  b.p_obstacle = p_obstacle;
  b.p_steer = p_steer;
  b.collision = collided;
  b.total = b.r_progress * (1.0 - c.w_obstacle * p_obstacle - c.w_steer * p_steer) -
            (collided ? c.collision_penalty : 0.0);
  return b;
}

}  // namespace racer

#endif  // RACER_REWARD_HPP
