#ifndef RACER_TD3_HPP
#define RACER_TD3_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "racer/mlp.hpp"
#include "racer/replay.hpp"
#include "racer/rng.hpp"
#include "racer/vehicle.hpp"

namespace racer {

struct Td3Config {
  double gamma = 0.95;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  int max_training_steps = 140000;
  int exploration_steps = 1000;
  int batch_size = 256;
  double tau = 0.005;
  int policy_delay = 2;
  // Noise scales are fractions of the normalized action half-range (1.0).
  double target_noise_sigma = 0.2;
  double target_noise_clip = 0.5;
  double exploration_noise_sigma = 0.1;
  int buffer_capacity = 200000;
  int hidden_units = 256;
  int hidden_layers = 2;

  void validate() const;
};

/// Maps a normalized action in [-1,1]^2 onto the vehicle command space:
/// speed spans [0, max_speed], steering spans +-max_steer.
Action denormalize_action(const Eigen::Vector2d& a, double max_speed,
                          double max_steer);

/// Scales raw observations into roughly unit range for the networks: speed
/// by its ceiling, steering by full lock, ranges by the lidar reach.
struct ObservationScale {
  double max_speed = 2.0;
  double max_steer = 0.434;
  double max_range = 10.0;

  Eigen::VectorXd operator()(const std::vector<double>& obs) const;
};

/// Twin Delayed DDPG over dense networks with hand-written gradients.
/// Owns six networks (actor, twin critics, and their targets) plus one
/// optimizer per online network. All randomness is drawn from the Rng
/// passed by the caller, so training streams stay serializable.
class Td3Agent {
 public:
  Td3Agent(int obs_dim, const Td3Config& config, Rng& init_rng);

  enum class Mode { Explore, Exploit };

  /// During the exploration phase (explore mode, step below
  /// exploration_steps) actions are uniform in the normalized box.
  /// Afterwards: actor output, plus clamped Gaussian noise in explore mode.
  Eigen::Vector2d select_action(const Eigen::VectorXd& obs, Mode mode,
                                int step, Rng& rng);

  struct UpdateReport {
    double critic1_loss = 0.0;
    double critic2_loss = 0.0;
    double actor_objective = 0.0;  // mean Q1, only when the actor stepped
    bool actor_updated = false;
  };

  /// One TD3 update on a uniform batch: both critics regress to the
  /// smoothed twin-minimum target; every policy_delay-th call the actor
  /// ascends mean Q1 and all targets soft-update.
  UpdateReport update(const ReplayBuffer& buffer, Rng& rng);

  /// Critic targets y = r + gamma*(1-done)*min(Q1', Q2') with smoothing
  /// noise already applied to the target action. Exposed for testing.
  Eigen::VectorXd critic_target(const ReplayBuffer::Batch& batch, Rng& rng);

  const Td3Config& config() const { return config_; }
  int obs_dim() const { return obs_dim_; }
  std::int64_t update_count() const { return update_count_; }

  Mlp& actor() { return *actor_; }
  const Mlp& actor() const { return *actor_; }
  Mlp& critic1() { return *critic1_; }
  const Mlp& critic1() const { return *critic1_; }
  Mlp& critic2() { return *critic2_; }
  const Mlp& critic2() const { return *critic2_; }
  Mlp& target_actor() { return *target_actor_; }
  const Mlp& target_actor() const { return *target_actor_; }
  Mlp& target_critic1() { return *target_critic1_; }
  const Mlp& target_critic1() const { return *target_critic1_; }
  Mlp& target_critic2() { return *target_critic2_; }
  const Mlp& target_critic2() const { return *target_critic2_; }
  Adam& actor_opt() { return *actor_opt_; }
  const Adam& actor_opt() const { return *actor_opt_; }
  Adam& critic1_opt() { return *critic1_opt_; }
  const Adam& critic1_opt() const { return *critic1_opt_; }
  Adam& critic2_opt() { return *critic2_opt_; }
  const Adam& critic2_opt() const { return *critic2_opt_; }
  void set_update_count(std::int64_t n) { update_count_ = n; }

 private:
  Td3Config config_;
  int obs_dim_;
  std::unique_ptr<Mlp> actor_, critic1_, critic2_;
  std::unique_ptr<Mlp> target_actor_, target_critic1_, target_critic2_;
  std::unique_ptr<Adam> actor_opt_, critic1_opt_, critic2_opt_;
  std::int64_t update_count_ = 0;
};

}  // namespace racer

#endif  // RACER_TD3_HPP
