#include "racer/td3.hpp"

#include <algorithm>
#include <cmath>

#include "racer/errors.hpp"

namespace racer {
namespace {

constexpr int kActDim = 2;

std::vector<int> net_sizes(int in, int hidden, int layers, int out) {
  std::vector<int> sizes;
  sizes.push_back(in);
  for (int i = 0; i < layers; ++i) sizes.push_back(hidden);
  sizes.push_back(out);
  return sizes;
}

Eigen::MatrixXd vstack(const Eigen::MatrixXd& top,
                       const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

void Td3Config::validate() const {
  if (gamma <= 0.0 || gamma >= 1.0) throw ConfigError("gamma must be in (0,1)");
  if (actor_lr <= 0.0 || critic_lr <= 0.0) {
    throw ConfigError("learning rates must be positive");
  }
  if (policy_delay < 1) throw ConfigError("policy_delay must be >= 1");
  if (batch_size <= 0 || buffer_capacity < batch_size) {
    throw ConfigError("buffer must hold at least one batch");
  }
  if (tau <= 0.0 || tau > 1.0) throw ConfigError("tau must be in (0,1]");
  if (exploration_steps < 0 || max_training_steps <= 0) {
    throw ConfigError("step budgets must be non-negative");
  }
  if (hidden_units <= 0 || hidden_layers < 1) {
    throw ConfigError("network shape must be positive");
  }
}

Action denormalize_action(const Eigen::Vector2d& a, double max_speed,
                          double max_steer) {
  return {0.5 * max_speed * (a(0) + 1.0), max_steer * a(1)};
}

Eigen::VectorXd ObservationScale::operator()(
    const std::vector<double>& obs) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(obs.size()));
  out[0] = obs[0] / max_speed;
  out[1] = obs[1] / max_steer;
  for (std::size_t i = 2; i < obs.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = obs[i] / max_range;
  }
  return out;
}

Td3Agent::Td3Agent(int obs_dim, const Td3Config& config, Rng& init_rng)
    : config_(config), obs_dim_(obs_dim) {
  config_.validate();
  if (obs_dim <= 0) throw ConfigError("obs_dim must be positive");
  const auto actor_sizes =
      net_sizes(obs_dim, config_.hidden_units, config_.hidden_layers, kActDim);
  const auto critic_sizes = net_sizes(obs_dim + kActDim, config_.hidden_units,
                                      config_.hidden_layers, 1);
  actor_ = std::make_unique<Mlp>(actor_sizes, Mlp::Output::Tanh, init_rng);
  critic1_ =
      std::make_unique<Mlp>(critic_sizes, Mlp::Output::Identity, init_rng);
  critic2_ =
      std::make_unique<Mlp>(critic_sizes, Mlp::Output::Identity, init_rng);
  target_actor_ =
      std::make_unique<Mlp>(actor_sizes, Mlp::Output::Tanh, init_rng);
  target_critic1_ =
      std::make_unique<Mlp>(critic_sizes, Mlp::Output::Identity, init_rng);
  target_critic2_ =
      std::make_unique<Mlp>(critic_sizes, Mlp::Output::Identity, init_rng);
  target_actor_->copy_params_from(*actor_);
  target_critic1_->copy_params_from(*critic1_);
  target_critic2_->copy_params_from(*critic2_);
  actor_opt_ = std::make_unique<Adam>(*actor_, config_.actor_lr);
  critic1_opt_ = std::make_unique<Adam>(*critic1_, config_.critic_lr);
  critic2_opt_ = std::make_unique<Adam>(*critic2_, config_.critic_lr);
}

Eigen::Vector2d Td3Agent::select_action(const Eigen::VectorXd& obs, Mode mode,
                                        int step, Rng& rng) {
  if (mode == Mode::Explore && step < config_.exploration_steps) {
    return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  }
  const Eigen::MatrixXd out = actor_->forward(obs);
  Eigen::Vector2d a(out(0, 0), out(1, 0));
  if (mode == Mode::Explore) {
    a(0) += rng.normal(0.0, config_.exploration_noise_sigma);
    a(1) += rng.normal(0.0, config_.exploration_noise_sigma);
  }
  a(0) = std::clamp(a(0), -1.0, 1.0);
  a(1) = std::clamp(a(1), -1.0, 1.0);
  return a;
}

Eigen::VectorXd Td3Agent::critic_target(const ReplayBuffer::Batch& batch,
                                        Rng& rng) {
  const Eigen::Index n = batch.reward.size();
  Eigen::MatrixXd next_action = target_actor_->forward(batch.next_obs);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (int i = 0; i < kActDim; ++i) {
      const double noise =
          std::clamp(rng.normal(0.0, config_.target_noise_sigma),
                     -config_.target_noise_clip, config_.target_noise_clip);
      next_action(i, k) = std::clamp(next_action(i, k) + noise, -1.0, 1.0);
    }
  }
  const Eigen::MatrixXd next_in = vstack(batch.next_obs, next_action);
  const Eigen::VectorXd q1 =
      target_critic1_->forward(next_in).row(0).transpose();
  const Eigen::VectorXd q2 =
      target_critic2_->forward(next_in).row(0).transpose();
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    y(k) = batch.reward(k) + config_.gamma * (1.0 - batch.done(k)) *
                                 std::min(q1(k), q2(k));
  }
  return y;
}

Td3Agent::UpdateReport Td3Agent::update(const ReplayBuffer& buffer, Rng& rng) {
  const ReplayBuffer::Batch batch = buffer.sample(config_.batch_size, rng);
  const Eigen::Index n = batch.reward.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  UpdateReport report;

  const Eigen::VectorXd y = critic_target(batch, rng);
  const Eigen::MatrixXd critic_in = vstack(batch.obs, batch.action);

  MlpGrads g1(*critic1_);
  const Eigen::VectorXd q1 = critic1_->forward(critic_in).row(0).transpose();
  Eigen::MatrixXd d1 = (2.0 * inv_n) * (q1 - y).transpose();
  critic1_->backward(d1, g1);
  critic1_opt_->step(*critic1_, g1);
  report.critic1_loss = inv_n * (q1 - y).squaredNorm();

  MlpGrads g2(*critic2_);
  const Eigen::VectorXd q2 = critic2_->forward(critic_in).row(0).transpose();
  Eigen::MatrixXd d2 = (2.0 * inv_n) * (q2 - y).transpose();
  critic2_->backward(d2, g2);
  critic2_opt_->step(*critic2_, g2);
  report.critic2_loss = inv_n * (q2 - y).squaredNorm();

  ++update_count_;
  if (update_count_ % config_.policy_delay == 0) {
    // Ascend mean Q1(s, actor(s)): push -1/n through the critic to get
    // dQ/da, then through the actor. Critic parameters stay frozen.
    const Eigen::MatrixXd a_pi = actor_->forward(batch.obs);
    const Eigen::MatrixXd q_in = vstack(batch.obs, a_pi);
    const Eigen::VectorXd q_pi = critic1_->forward(q_in).row(0).transpose();
    report.actor_objective = inv_n * q_pi.sum();
    report.actor_updated = true;

    MlpGrads scratch(*critic1_);
    const Eigen::MatrixXd d_q =
        Eigen::MatrixXd::Constant(1, n, -inv_n);
    const Eigen::MatrixXd d_in = critic1_->backward(d_q, scratch);
    MlpGrads ga(*actor_);
    actor_->backward(d_in.bottomRows(kActDim), ga);
    actor_opt_->step(*actor_, ga);

    target_actor_->soft_update_from(*actor_, config_.tau);
    target_critic1_->soft_update_from(*critic1_, config_.tau);
    target_critic2_->soft_update_from(*critic2_, config_.tau);
  }
  return report;
}

}  // namespace racer
