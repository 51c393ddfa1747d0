#ifndef RACER_MLP_HPP
#define RACER_MLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "racer/rng.hpp"

namespace racer {

class Mlp;

/// Per-layer gradient accumulators, shaped like the network they came from.
struct MlpGrads {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;

  explicit MlpGrads(const Mlp& net);
  void zero();
};

/// Dense feed-forward net with rectifier hidden layers, explicit forward
/// caches, and hand-written backpropagation. Batches are column-major:
/// one sample per column. 64-bit parameters throughout so finite-difference
/// gradient checks are meaningful.
class Mlp {
 public:
  enum class Output { Identity, Tanh };

  /// Uniform init in +-1/sqrt(fan_in) per layer, drawn row-major from rng.
  Mlp(std::vector<int> layer_sizes, Output output, Rng& rng);

  /// Computes the batch output and caches activations for backward().
  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& input);

  /// Backpropagates dL/d(output) through the caches of the last forward()
  /// call. Gradients are sums over the batch; scale dL upstream for means.
  /// Returns dL/d(input).
  Eigen::MatrixXd backward(const Eigen::MatrixXd& d_output,
                           MlpGrads& grads) const;

  const std::vector<int>& layer_sizes() const { return sizes_; }
  Output output_kind() const { return output_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }
  std::int64_t param_count() const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  void copy_params_from(const Mlp& other);
  /// theta' <- tau*theta + (1-tau)*theta', elementwise.
  void soft_update_from(const Mlp& online, double tau);

  /// Parameters flattened in declared layer order: W row-major, then b.
  void serialize_params(std::vector<double>& out) const;
  void deserialize_params(const double* data, std::int64_t count);
  std::uint64_t param_hash() const;

 private:
  std::vector<int> sizes_;
  Output output_;
  std::vector<Eigen::MatrixXd> weights_;  // weights_[l] is sizes_[l+1] x sizes_[l]
  std::vector<Eigen::VectorXd> biases_;

  // Forward caches: activations_[0] is the input, activations_[l+1] the
  // post-activation of layer l. preacts_[l] matches layer l.
  mutable std::vector<Eigen::MatrixXd> activations_;
  mutable std::vector<Eigen::MatrixXd> preacts_;
};

/// Adaptive moment estimation over one network's parameters.
class Adam {
 public:
  Adam(const Mlp& net, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);

  /// One descent step along grads (sums or means; caller's convention).
  void step(Mlp& net, const MlpGrads& grads);

  double learning_rate() const { return lr_; }
  std::int64_t step_count() const { return t_; }

  /// Moments and step counter, for exact training resume.
  void serialize_state(std::vector<double>& out) const;
  void deserialize_state(const double* data, std::int64_t count);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Eigen::MatrixXd> mW_, vW_;
  std::vector<Eigen::VectorXd> mb_, vb_;
};

/// FNV-1a over a little-endian byte view of the values.
std::uint64_t fnv1a64(const void* data, std::size_t bytes,
                      std::uint64_t seed = 14695981039346656037ull);

}  // namespace racer

#endif  // RACER_MLP_HPP
