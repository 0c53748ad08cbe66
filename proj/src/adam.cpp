#include "ovd/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace ovd {

AdamState::AdamState(const Mlp& params, AdamConfig config) : config_(config) {
  const auto& layers = params.layers();
  m_weight_.reserve(layers.size());
  v_weight_.reserve(layers.size());
  m_bias_.reserve(layers.size());
  v_bias_.reserve(layers.size());
  for (const DenseLayer& l : layers) {
    m_weight_.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    v_weight_.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    m_bias_.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    v_bias_.push_back(Eigen::VectorXd::Zero(l.bias.size()));
  }
}

void AdamState::step(Mlp& params, const MlpGradients& grads) {
  auto& layers = params.layers();
  if (layers.size() != m_weight_.size() || grads.weight.size() != layers.size() ||
      grads.bias.size() != layers.size())
    throw std::invalid_argument("adam: gradient shape does not match state");

  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (grads.weight[i].rows() != layers[i].weight.rows() ||
        grads.weight[i].cols() != layers[i].weight.cols() ||
        grads.bias[i].size() != layers[i].bias.size())
      throw std::invalid_argument("adam: gradient shape does not match parameters");

    m_weight_[i] = config_.beta1 * m_weight_[i] + (1.0 - config_.beta1) * grads.weight[i];
    v_weight_[i] = config_.beta2 * v_weight_[i].array() +
                   (1.0 - config_.beta2) * grads.weight[i].array().square();
    layers[i].weight.array() -= config_.learning_rate * (m_weight_[i].array() / bc1) /
                                ((v_weight_[i].array() / bc2).sqrt() + config_.epsilon);

    m_bias_[i] = config_.beta1 * m_bias_[i] + (1.0 - config_.beta1) * grads.bias[i];
    v_bias_[i] = config_.beta2 * v_bias_[i].array() +
                 (1.0 - config_.beta2) * grads.bias[i].array().square();
    layers[i].bias.array() -= config_.learning_rate * (m_bias_[i].array() / bc1) /
                              ((v_bias_[i].array() / bc2).sqrt() + config_.epsilon);
  }
}

}  // namespace ovd
