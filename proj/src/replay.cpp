#include "racer/replay.hpp"

#include "racer/errors.hpp"

namespace racer {

ReplayBuffer::ReplayBuffer(int capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity <= 0 || obs_dim <= 0 || act_dim <= 0) {
    throw ConfigError("replay buffer dimensions must be positive");
  }
  const std::size_t cap = static_cast<std::size_t>(capacity);
  obs_.resize(cap * static_cast<std::size_t>(obs_dim));
  act_.resize(cap * static_cast<std::size_t>(act_dim));
  next_obs_.resize(cap * static_cast<std::size_t>(obs_dim));
  reward_.resize(cap);
  done_.resize(cap);
}

void ReplayBuffer::add(const Eigen::VectorXd& obs,
                       const Eigen::VectorXd& action, double reward,
                       const Eigen::VectorXd& next_obs, bool done) {
  if (obs.size() != obs_dim_ || next_obs.size() != obs_dim_ ||
      action.size() != act_dim_) {
    throw ConfigError("transition dimensions do not match the buffer");
  }
  const std::size_t o = static_cast<std::size_t>(cursor_) *
                        static_cast<std::size_t>(obs_dim_);
  const std::size_t a = static_cast<std::size_t>(cursor_) *
                        static_cast<std::size_t>(act_dim_);
  for (int i = 0; i < obs_dim_; ++i) {
    obs_[o + static_cast<std::size_t>(i)] = obs(i);
    next_obs_[o + static_cast<std::size_t>(i)] = next_obs(i);
  }
  for (int i = 0; i < act_dim_; ++i) {
    act_[a + static_cast<std::size_t>(i)] = action(i);
  }
  reward_[static_cast<std::size_t>(cursor_)] = reward;
  done_[static_cast<std::size_t>(cursor_)] = done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

ReplayBuffer::Batch ReplayBuffer::sample(int n, Rng& rng) const {
  if (n <= 0) throw ConfigError("batch size must be positive");
  if (size_ < n) {
    throw BufferTooSmall("replay holds " + std::to_string(size_) +
                         " transitions, batch needs " + std::to_string(n));
  }
  Batch b;
  b.obs.resize(obs_dim_, n);
  b.action.resize(act_dim_, n);
  b.next_obs.resize(obs_dim_, n);
  b.reward.resize(n);
  b.done.resize(n);
  for (int k = 0; k < n; ++k) {
    const std::size_t idx =
        rng.uniform_int(static_cast<std::uint64_t>(size_));
    const std::size_t o = idx * static_cast<std::size_t>(obs_dim_);
    const std::size_t a = idx * static_cast<std::size_t>(act_dim_);
    for (int i = 0; i < obs_dim_; ++i) {
      b.obs(i, k) = obs_[o + static_cast<std::size_t>(i)];
      b.next_obs(i, k) = next_obs_[o + static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < act_dim_; ++i) {
      b.action(i, k) = act_[a + static_cast<std::size_t>(i)];
    }
    b.reward(k) = reward_[idx];
    b.done(k) = done_[idx];
  }
  return b;
}

void ReplayBuffer::serialize(std::vector<double>& out) const {
  out.push_back(static_cast<double>(size_));
  out.push_back(static_cast<double>(cursor_));
  const std::size_t n = static_cast<std::size_t>(size_);
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(obs_dim_); ++i) {
    out.push_back(obs_[i]);
  }
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(act_dim_); ++i) {
    out.push_back(act_[i]);
  }
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(obs_dim_); ++i) {
    out.push_back(next_obs_[i]);
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(reward_[i]);
  for (std::size_t i = 0; i < n; ++i) out.push_back(done_[i]);
}

void ReplayBuffer::deserialize(const double* data, std::int64_t count) {
  if (count < 2) throw ConfigError("replay blob too short");
  const int size = static_cast<int>(data[0]);
  const int cursor = static_cast<int>(data[1]);
  if (size < 0 || size > capacity_ || cursor < 0 || cursor >= capacity_) {
    throw ConfigError("replay blob header out of range");
  }
  const std::int64_t per = 2 * obs_dim_ + act_dim_ + 2;
  if (count != 2 + static_cast<std::int64_t>(size) * per) {
    throw ConfigError("replay blob size mismatch");
  }
  size_ = size;
  cursor_ = cursor;
  std::int64_t k = 2;
  const std::size_t n = static_cast<std::size_t>(size_);
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(obs_dim_); ++i) {
    obs_[i] = data[k++];
  }
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(act_dim_); ++i) {
    act_[i] = data[k++];
  }
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(obs_dim_); ++i) {
    next_obs_[i] = data[k++];
  }
  for (std::size_t i = 0; i < n; ++i) reward_[i] = data[k++];
  for (std::size_t i = 0; i < n; ++i) done_[i] = data[k++];
}

}  // namespace racer
