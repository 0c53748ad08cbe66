#include "ovd/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ovd {

namespace {

void apply_activation(Activation act, Eigen::MatrixXd& z) {
  if (act == Activation::kTanh) z = matrix_tanh(z);
}

}  // namespace

Eigen::MatrixXd matrix_tanh(const Eigen::MatrixXd& x) {
  const Eigen::ArrayXXd e = (-2.0 * x.array().abs()).exp();
  return (x.array().sign() * (1.0 - e) / (1.0 + e)).matrix();
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("mlp: needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    if (l.weight.rows() != l.bias.size())
      throw std::invalid_argument("mlp: bias size does not match weight rows");
    if (i + 1 < layers_.size() && layers_[i + 1].weight.cols() != l.weight.rows())
      throw std::invalid_argument("mlp: consecutive layer dimensions do not chain");
    if (!l.weight.allFinite() || !l.bias.allFinite())
      throw std::invalid_argument("mlp: non-finite parameter entries");
  }
}

Mlp Mlp::random_init(const std::vector<int>& dims, Activation hidden, Activation output,
                     RngStream& rng) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: dims needs an input and an output");
  std::vector<DenseLayer> layers;
  layers.reserve(dims.size() - 1);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int in = dims[i];
    const int out = dims[i + 1];
    if (in < 1 || out < 1) throw std::invalid_argument("mlp: layer dims must be positive");
    DenseLayer layer;
    layer.weight.resize(out, in);
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (int c = 0; c < in; ++c)
      for (int r = 0; r < out; ++r) layer.weight(r, c) = rng.uniform(-limit, limit);
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.activation = (i + 2 == dims.size()) ? output : hidden;
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_dim()) throw std::invalid_argument("mlp: input dimension mismatch");
  Eigen::MatrixXd x = inputs;
  for (const DenseLayer& l : layers_) {
    Eigen::MatrixXd z = (l.weight * x).colwise() + l.bias;
    apply_activation(l.activation, z);
    x = std::move(z);
  }
  return x;
}

GradientTape forward_tape(const Mlp& net, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.input_dim())
    throw std::invalid_argument("mlp: input dimension mismatch");
  GradientTape tape;
  tape.activations.reserve(net.layer_count() + 1);
  tape.activations.push_back(inputs);
  for (const DenseLayer& l : net.layers()) {
    Eigen::MatrixXd z = (l.weight * tape.activations.back()).colwise() + l.bias;
    apply_activation(l.activation, z);
    tape.activations.push_back(std::move(z));
  }
  return tape;
}

MlpGradients backward(const Mlp& net, const GradientTape& tape,
                      const Eigen::MatrixXd& output_cotangent, Eigen::MatrixXd* input_cotangent,
                      bool skip_parameters) {
  const auto& layers = net.layers();
  if (tape.activations.size() != layers.size() + 1)
    throw std::invalid_argument("mlp: tape does not match network");
  if (output_cotangent.rows() != net.output_dim() ||
      output_cotangent.cols() != tape.output().cols())
    throw std::invalid_argument("mlp: cotangent shape mismatch");

  MlpGradients grads;
  if (!skip_parameters) {
    grads.weight.resize(layers.size());
    grads.bias.resize(layers.size());
  }
  Eigen::MatrixXd cot = output_cotangent;
  for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
    const std::size_t li = static_cast<std::size_t>(i);
    const DenseLayer& l = layers[li];
    const Eigen::MatrixXd& post = tape.activations[li + 1];
    // tanh' recovered from the post-activation value: 1 - tanh^2
    Eigen::MatrixXd dz;
    if (l.activation == Activation::kTanh)
      dz = cot.array() * (1.0 - post.array().square());
    else
      dz = std::move(cot);
    if (!skip_parameters) {
      grads.weight[li] = dz * tape.activations[li].transpose();
      grads.bias[li] = dz.rowwise().sum();
    }
    if (i > 0 || input_cotangent != nullptr) cot = l.weight.transpose() * dz;
  }
  if (input_cotangent != nullptr) *input_cotangent = std::move(cot);
  return grads;
}

GradientResult grad(const Mlp& net, const Eigen::VectorXd& input, const ScalarLoss& loss) {
  if (!loss.value || !loss.gradient)
    throw std::invalid_argument("mlp: loss needs both a value and a gradient function");
  GradientTape tape = forward_tape(net, input);
  const Eigen::VectorXd y = tape.output().col(0);
  Eigen::VectorXd gy = loss.gradient(y);
  if (gy.size() != y.size())
    throw std::invalid_argument("mlp: loss gradient dimension mismatch");
  GradientResult result;
  result.loss = loss.value(y);
  Eigen::MatrixXd input_cot;
  result.parameters = backward(net, tape, gy, &input_cot);
  result.input = input_cot.col(0);
  return result;
}

}  // namespace ovd
