#ifndef RACER_REPLAY_HPP
#define RACER_REPLAY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "racer/rng.hpp"

namespace racer {

/// Fixed-capacity transition ring with uniform sampling. Oldest entries
/// are overwritten once full. Column-major batches: one sample per column.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_dim, int act_dim);

  void add(const Eigen::VectorXd& obs, const Eigen::VectorXd& action,
           double reward, const Eigen::VectorXd& next_obs, bool done);

  struct Batch {
    Eigen::MatrixXd obs;       // obs_dim x n
    Eigen::MatrixXd action;    // act_dim x n
    Eigen::VectorXd reward;    // n
    Eigen::MatrixXd next_obs;  // obs_dim x n
    Eigen::VectorXd done;      // n, 0 or 1
  };

  /// Uniform with replacement over the current size. Throws BufferTooSmall
  /// when fewer than n transitions are stored.
  Batch sample(int n, Rng& rng) const;

  int size() const { return size_; }
  int capacity() const { return capacity_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

  /// Full contents in insertion-ring layout, for exact training resume.
  void serialize(std::vector<double>& out) const;
  void deserialize(const double* data, std::int64_t count);

 private:
  int capacity_, obs_dim_, act_dim_;
  int size_ = 0, cursor_ = 0;
  std::vector<double> obs_, act_, next_obs_, reward_, done_;
};

}  // namespace racer

#endif  // RACER_REPLAY_HPP
