#include "racer/mlp.hpp"

#include <cmath>
#include <cstring>

#include "racer/errors.hpp"

namespace racer {

MlpGrads::MlpGrads(const Mlp& net) {
  dW.reserve(static_cast<std::size_t>(net.layer_count()));
  db.reserve(static_cast<std::size_t>(net.layer_count()));
  for (int l = 0; l < net.layer_count(); ++l) {
    dW.emplace_back(Eigen::MatrixXd::Zero(net.weights()[l].rows(),
                                          net.weights()[l].cols()));
    db.emplace_back(Eigen::VectorXd::Zero(net.biases()[l].size()));
  }
}

void MlpGrads::zero() {
  for (auto& m : dW) m.setZero();
  for (auto& v : db) v.setZero();
}

Mlp::Mlp(std::vector<int> layer_sizes, Output output, Rng& rng)
    : sizes_(std::move(layer_sizes)), output_(output) {
  if (sizes_.size() < 2) throw ConfigError("network needs >= 2 layer sizes");
  for (int s : sizes_) {
    if (s <= 0) throw ConfigError("layer sizes must be positive");
  }
  const int layers = static_cast<int>(sizes_.size()) - 1;
  weights_.reserve(static_cast<std::size_t>(layers));
  biases_.reserve(static_cast<std::size_t>(layers));
  for (int l = 0; l < layers; ++l) {
    const int fan_in = sizes_[static_cast<std::size_t>(l)];
    const int fan_out = sizes_[static_cast<std::size_t>(l) + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    Eigen::VectorXd b(fan_out);
    for (int r = 0; r < fan_out; ++r) b(r) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
  activations_.resize(static_cast<std::size_t>(layers) + 1);
  preacts_.resize(static_cast<std::size_t>(layers));
}

const Eigen::MatrixXd& Mlp::forward(const Eigen::MatrixXd& input) {
  if (input.rows() != sizes_.front()) {
    throw ConfigError("forward input has wrong dimension");
  }
  const int layers = layer_count();
  activations_[0] = input;
  for (int l = 0; l < layers; ++l) {
    const std::size_t li = static_cast<std::size_t>(l);
    preacts_[li].noalias() = weights_[li] * activations_[li];
    preacts_[li].colwise() += biases_[li];
    if (l + 1 < layers) {
      activations_[li + 1] = preacts_[li].cwiseMax(0.0);
    } else if (output_ == Output::Tanh) {
      activations_[li + 1] = preacts_[li].array().tanh().matrix();
    } else {
      activations_[li + 1] = preacts_[li];
    }
  }
  return activations_.back();
}

Eigen::MatrixXd Mlp::backward(const Eigen::MatrixXd& d_output,
                              MlpGrads& grads) const {
  const int layers = layer_count();
  Eigen::MatrixXd delta;
  if (output_ == Output::Tanh) {
    const Eigen::MatrixXd& y = activations_.back();
    delta = d_output.cwiseProduct(
        (1.0 - y.array().square()).matrix());
  } else {
    delta = d_output;
  }
  for (int l = layers - 1; l >= 0; --l) {
    const std::size_t li = static_cast<std::size_t>(l);
    grads.dW[li].noalias() += delta * activations_[li].transpose();
    grads.db[li] += delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd d_act = weights_[li].transpose() * delta;
      // Rectifier gate from the cached pre-activation of the layer below.
      delta = d_act.cwiseProduct(
          (preacts_[li - 1].array() > 0.0).cast<double>().matrix());
    } else {
      return weights_[0].transpose() * delta;
    }
  }
  return {};
}

std::int64_t Mlp::param_count() const {
  std::int64_t n = 0;
  for (int l = 0; l < layer_count(); ++l) {
    n += weights_[static_cast<std::size_t>(l)].size() +
         biases_[static_cast<std::size_t>(l)].size();
  }
  return n;
}

void Mlp::copy_params_from(const Mlp& other) {
  weights_ = other.weights_;
  biases_ = other.biases_;
}

void Mlp::soft_update_from(const Mlp& online, double tau) {
  for (int l = 0; l < layer_count(); ++l) {
    const std::size_t li = static_cast<std::size_t>(l);
    weights_[li] = tau * online.weights_[li] + (1.0 - tau) * weights_[li];
    biases_[li] = tau * online.biases_[li] + (1.0 - tau) * biases_[li];
  }
}

void Mlp::serialize_params(std::vector<double>& out) const {
  out.reserve(out.size() + static_cast<std::size_t>(param_count()));
  for (int l = 0; l < layer_count(); ++l) {
    const Eigen::MatrixXd& w = weights_[static_cast<std::size_t>(l)];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out.push_back(w(r, c));
    }
    const Eigen::VectorXd& b = biases_[static_cast<std::size_t>(l)];
    for (Eigen::Index r = 0; r < b.size(); ++r) out.push_back(b(r));
  }
}

void Mlp::deserialize_params(const double* data, std::int64_t count) {
  if (count != param_count()) {
    throw ConfigError("parameter blob size mismatch");
  }
  std::int64_t k = 0;
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::MatrixXd& w = weights_[static_cast<std::size_t>(l)];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = data[k++];
    }
    Eigen::VectorXd& b = biases_[static_cast<std::size_t>(l)];
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = data[k++];
  }
}

std::uint64_t Mlp::param_hash() const {
  std::vector<double> flat;
  serialize_params(flat);
  return fnv1a64(flat.data(), flat.size() * sizeof(double));
}

Adam::Adam(const Mlp& net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (int l = 0; l < net.layer_count(); ++l) {
    const std::size_t li = static_cast<std::size_t>(l);
    mW_.emplace_back(Eigen::MatrixXd::Zero(net.weights()[li].rows(),
                                           net.weights()[li].cols()));
    vW_.emplace_back(Eigen::MatrixXd::Zero(net.weights()[li].rows(),
                                           net.weights()[li].cols()));
    mb_.emplace_back(Eigen::VectorXd::Zero(net.biases()[li].size()));
    vb_.emplace_back(Eigen::VectorXd::Zero(net.biases()[li].size()));
  }
}

void Adam::step(Mlp& net, const MlpGrads& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (int l = 0; l < net.layer_count(); ++l) {
    const std::size_t li = static_cast<std::size_t>(l);
    mW_[li] = beta1_ * mW_[li] + (1.0 - beta1_) * grads.dW[li];
    vW_[li] = beta2_ * vW_[li] +
              (1.0 - beta2_) * grads.dW[li].cwiseProduct(grads.dW[li]);
    net.weights()[li].array() -=
        lr_ * (mW_[li].array() / bc1) /
        ((vW_[li].array() / bc2).sqrt() + eps_);
    mb_[li] = beta1_ * mb_[li] + (1.0 - beta1_) * grads.db[li];
    vb_[li] = beta2_ * vb_[li] +
              (1.0 - beta2_) * grads.db[li].cwiseProduct(grads.db[li]);
    net.biases()[li].array() -=
        lr_ * (mb_[li].array() / bc1) /
        ((vb_[li].array() / bc2).sqrt() + eps_);
  }
}

void Adam::serialize_state(std::vector<double>& out) const {
  out.push_back(static_cast<double>(t_));
  auto push_mat = [&out](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    }
  };
  for (std::size_t l = 0; l < mW_.size(); ++l) {
    push_mat(mW_[l]);
    push_mat(vW_[l]);
    for (Eigen::Index r = 0; r < mb_[l].size(); ++r) out.push_back(mb_[l](r));
    for (Eigen::Index r = 0; r < vb_[l].size(); ++r) out.push_back(vb_[l](r));
  }
}

void Adam::deserialize_state(const double* data, std::int64_t count) {
  std::int64_t expect = 1;
  for (std::size_t l = 0; l < mW_.size(); ++l) {
    expect += 2 * mW_[l].size() + 2 * mb_[l].size();
  }
  if (count != expect) throw ConfigError("optimizer state size mismatch");
  std::int64_t k = 0;
  t_ = static_cast<std::int64_t>(data[k++]);
  auto read_mat = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[k++];
    }
  };
  for (std::size_t l = 0; l < mW_.size(); ++l) {
    read_mat(mW_[l]);
    read_mat(vW_[l]);
    for (Eigen::Index r = 0; r < mb_[l].size(); ++r) mb_[l](r) = data[k++];
    for (Eigen::Index r = 0; r < vb_[l].size(); ++r) vb_[l](r) = data[k++];
  }
}

std::uint64_t fnv1a64(const void* data, std::size_t bytes, std::uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace racer
