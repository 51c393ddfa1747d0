#include <cmath>

#include "doctest.h"
#include "racer/errors.hpp"
#include "racer/td3.hpp"

using namespace racer;

namespace {

Td3Config tiny_config() {
  Td3Config cfg;
  cfg.hidden_units = 8;
  cfg.hidden_layers = 2;
  cfg.batch_size = 4;
  cfg.buffer_capacity = 64;
  cfg.exploration_steps = 100;
  return cfg;
}

void zero_net(Mlp& net) {
  for (auto& w : net.weights()) w.setZero();
  for (auto& b : net.biases()) b.setZero();
}

// Constant-output critic: all weights zero, final bias fixed.
void make_constant_critic(Mlp& net, double value) {
  zero_net(net);
  net.biases().back()(0) = value;
}

// Critic that returns the first action coordinate exactly: two rectifier
// units carry +a0 and -a0, the head subtracts them.
void make_action_probe_critic(Mlp& net, int obs_dim) {
  zero_net(net);
  net.weights()[0](0, obs_dim) = 1.0;
  net.weights()[0](1, obs_dim) = -1.0;
  net.weights()[1](0, 0) = 1.0;
  net.weights()[1](1, 1) = 1.0;
  net.weights().back()(0, 0) = 1.0;
  net.weights().back()(0, 1) = -1.0;
}

ReplayBuffer filled_buffer(int obs_dim, int n, std::uint64_t seed,
                           double reward = 1.0, bool done = false) {
  ReplayBuffer buf(256, obs_dim, 2);
  Rng rng(seed);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd obs(obs_dim), next(obs_dim);
    for (int i = 0; i < obs_dim; ++i) {
      obs(i) = rng.uniform(-1.0, 1.0);
      next(i) = rng.uniform(-1.0, 1.0);
    }
    const Eigen::VectorXd act =
        Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    buf.add(obs, act, reward, next, done);
  }
  return buf;
}

}  // namespace

TEST_SUITE_BEGIN("td3");

TEST_CASE("critic target bootstraps from the twin minimum") {
  Rng init(1);
  Td3Agent agent(3, tiny_config(), init);
  make_constant_critic(agent.target_critic1(), 2.0);
  make_constant_critic(agent.target_critic2(), 1.5);
  ReplayBuffer buf = filled_buffer(3, 8, 2, 1.0, false);
  Rng rng(3);
  const Eigen::VectorXd y = agent.critic_target(buf.sample(4, rng), rng);
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    CHECK(y(k) == 1.0 + 0.95 * 1.5);
  }
}

TEST_CASE("terminal transitions cut the bootstrap to the bare reward") {
  Rng init(1);
  Td3Agent agent(3, tiny_config(), init);
  ReplayBuffer buf = filled_buffer(3, 8, 2, -25.0, true);
  Rng rng(3);
  const Eigen::VectorXd y = agent.critic_target(buf.sample(4, rng), rng);
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    CHECK(y(k) == -25.0);
  }
}

TEST_CASE("zero noise clip degenerates smoothing to the target action") {
  Td3Config cfg = tiny_config();
  cfg.target_noise_clip = 0.0;
  Rng init(1);
  Td3Agent agent(3, cfg, init);
  ReplayBuffer buf = filled_buffer(3, 8, 2);
  Rng ra(10), rb(77);  // different noise streams must not matter
  Rng sa(5), sb(5);
  const Eigen::VectorXd ya = agent.critic_target(buf.sample(4, sa), ra);
  const Eigen::VectorXd yb = agent.critic_target(buf.sample(4, sb), rb);
  CHECK(ya == yb);
}

TEST_CASE("smoothing noise never exceeds the clip in any coordinate") {
  Td3Config cfg = tiny_config();
  cfg.target_noise_sigma = 10.0;  // force the clamp to bind
  cfg.target_noise_clip = 0.3;
  cfg.gamma = 0.5;
  Rng init(1);
  Td3Agent agent(3, cfg, init);
  zero_net(agent.target_actor());  // squash(0) = 0, so noise is all there is
  make_action_probe_critic(agent.target_critic1(), 3);
  make_action_probe_critic(agent.target_critic2(), 3);
  ReplayBuffer buf = filled_buffer(3, 64, 4, 0.0, false);
  Rng rng(6);
  double max_seen = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd y = agent.critic_target(buf.sample(32, rng), rng);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double a0 = y(k) / cfg.gamma;  // probe critic returns a0 exactly
      CHECK(std::abs(a0) <= 0.3 + 1e-12);
      max_seen = std::max(max_seen, std::abs(a0));
    }
  }
  CHECK(max_seen > 0.29);  // sigma 10 should pin the clamp almost always
}

TEST_CASE("exploration phase draws uniform actions, exploit is deterministic") {
  Rng init(1);
  Td3Agent agent(3, tiny_config(), init);
  Rng rng(2);
  const Eigen::VectorXd obs = Eigen::Vector3d(0.2, -0.4, 0.9);
  double sum0 = 0.0, sum1 = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Vector2d a =
        agent.select_action(obs, Td3Agent::Mode::Explore, 50, rng);
    CHECK(a(0) >= -1.0);
    CHECK(a(0) <= 1.0);
    sum0 += a(0);
    sum1 += a(1);
  }
  CHECK(std::abs(sum0 / 10000.0) < 0.05);  // midpoint of the bounds
  CHECK(std::abs(sum1 / 10000.0) < 0.05);

  const Eigen::Vector2d e1 =
      agent.select_action(obs, Td3Agent::Mode::Exploit, 50, rng);
  const Eigen::Vector2d e2 =
      agent.select_action(obs, Td3Agent::Mode::Exploit, 999999, rng);
  CHECK(e1 == e2);

  const Eigen::Vector2d n1 =
      agent.select_action(obs, Td3Agent::Mode::Explore, 200, rng);
  CHECK(n1 != e1);  // past exploration: actor plus noise
  CHECK(std::abs(n1(0)) <= 1.0);
  CHECK(std::abs(n1(1)) <= 1.0);
}

TEST_CASE("saturated actor output maps exactly onto the action bounds") {
  Rng init(1);
  Td3Agent agent(3, tiny_config(), init);
  zero_net(agent.actor());
  agent.actor().biases().back()(0) = 1000.0;
  agent.actor().biases().back()(1) = -1000.0;
  Rng rng(2);
  const Eigen::Vector2d a = agent.select_action(
      Eigen::Vector3d(0.1, 0.2, 0.3), Td3Agent::Mode::Exploit, 5000, rng);
  CHECK(a(0) == 1.0);
  CHECK(a(1) == -1.0);
  const Action cmd = denormalize_action(a, 2.0, 0.434);
  CHECK(cmd.speed == 2.0);
  CHECK(cmd.steer == -0.434);
  CHECK(denormalize_action({-1.0, 0.0}, 2.0, 0.434).speed == 0.0);
  CHECK(denormalize_action({0.0, 0.0}, 2.0, 0.434).speed == 1.0);
}

TEST_CASE("actor only steps on every policy_delay-th update") {
  Rng init(1);
  Td3Config cfg = tiny_config();
  cfg.policy_delay = 2;
  Td3Agent agent(3, cfg, init);
  ReplayBuffer buf = filled_buffer(3, 64, 2);
  Rng rng(4);
  const std::uint64_t actor0 = agent.actor().param_hash();
  const std::uint64_t target0 = agent.target_critic1().param_hash();
  const Td3Agent::UpdateReport r1 = agent.update(buf, rng);
  CHECK(!r1.actor_updated);
  CHECK(agent.actor().param_hash() == actor0);
  CHECK(agent.target_critic1().param_hash() == target0);  // targets wait too
  const Td3Agent::UpdateReport r2 = agent.update(buf, rng);
  CHECK(r2.actor_updated);
  CHECK(agent.actor().param_hash() != actor0);
  CHECK(agent.target_critic1().param_hash() != target0);
}

TEST_CASE("tau of one snaps targets onto the online networks") {
  Rng init(1);
  Td3Config cfg = tiny_config();
  cfg.tau = 1.0;
  cfg.policy_delay = 1;
  Td3Agent agent(3, cfg, init);
  ReplayBuffer buf = filled_buffer(3, 64, 2);
  Rng rng(4);
  agent.update(buf, rng);
  CHECK(agent.target_actor().param_hash() == agent.actor().param_hash());
  CHECK(agent.target_critic1().param_hash() == agent.critic1().param_hash());
  CHECK(agent.target_critic2().param_hash() == agent.critic2().param_hash());
}

TEST_CASE("updates are reproducible from equal seeds") {
  Rng ia(21), ib(21);
  Td3Agent a(3, tiny_config(), ia);
  Td3Agent b(3, tiny_config(), ib);
  ReplayBuffer buf_a = filled_buffer(3, 64, 2);
  ReplayBuffer buf_b = filled_buffer(3, 64, 2);
  Rng ra(4), rb(4);
  for (int k = 0; k < 10; ++k) {
    a.update(buf_a, ra);
    b.update(buf_b, rb);
  }
  CHECK(a.actor().param_hash() == b.actor().param_hash());
  CHECK(a.critic1().param_hash() == b.critic1().param_hash());
  CHECK(a.target_critic2().param_hash() == b.target_critic2().param_hash());
}

TEST_CASE("critic regression improves on a fixed target distribution") {
  Rng init(30);
  Td3Config cfg = tiny_config();
  cfg.batch_size = 32;
  Td3Agent agent(3, cfg, init);
  ReplayBuffer buf = filled_buffer(3, 128, 7, 0.5, true);  // y == 0.5 always
  Rng rng(8);
  double first = 0.0, last = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Td3Agent::UpdateReport r = agent.update(buf, rng);
    if (k == 0) first = r.critic1_loss;
    last = r.critic1_loss;
  }
  CHECK(last < 0.1 * first);
}

TEST_CASE("update on an underfilled buffer raises BufferTooSmall") {
  Rng init(1);
  Td3Agent agent(3, tiny_config(), init);
  ReplayBuffer buf = filled_buffer(3, 2, 2);
  Rng rng(4);
  CHECK_THROWS_AS(agent.update(buf, rng), BufferTooSmall);
}

TEST_CASE("config validation rejects out-of-range values") {
  Rng init(1);
  Td3Config bad = tiny_config();
  bad.gamma = 1.0;
  CHECK_THROWS_AS(Td3Agent(3, bad, init), ConfigError);
  bad = tiny_config();
  bad.policy_delay = 0;
  CHECK_THROWS_AS(Td3Agent(3, bad, init), ConfigError);
  bad = tiny_config();
  bad.buffer_capacity = bad.batch_size - 1;
  CHECK_THROWS_AS(Td3Agent(3, bad, init), ConfigError);
}

TEST_SUITE_END();
