#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "ovd/rng.hpp"

namespace ovd {

enum class Activation { kTanh, kIdentity };

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
  Activation activation = Activation::kIdentity;
};

/// Fully connected network over 64-bit reals. Batches are column-major: one
/// sample per column. Hidden layers use tanh (smooth everywhere, no
/// subgradient choices needed); output layers are linear.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  /// Glorot-uniform weights, zero biases. `dims` = {in, hidden..., out}.
  static Mlp random_init(const std::vector<int>& dims, Activation hidden, Activation output,
                         RngStream& rng);

  int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  std::size_t layer_count() const { return layers_.size(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Recorded forward pass: activations[0] is the input, activations[i+1] the
/// post-activation output of layer i. Sufficient for one exact reverse sweep.
struct GradientTape {
  std::vector<Eigen::MatrixXd> activations;
  const Eigen::MatrixXd& output() const { return activations.back(); }
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;
};

/// Elementwise tanh routed through Eigen's vectorized exp; markedly faster
/// than scalar libm tanh on double matrices. Exact at 0, odd, bounded by 1.
Eigen::MatrixXd matrix_tanh(const Eigen::MatrixXd& x);

GradientTape forward_tape(const Mlp& net, const Eigen::MatrixXd& inputs);

/// Reverse-mode sweep. `output_cotangent` is dL/d(output); parameter gradients
/// accumulate over batch columns. Pass `input_cotangent` to also receive
/// dL/d(input); set `skip_parameters` when only the input gradient is needed.
MlpGradients backward(const Mlp& net, const GradientTape& tape,
                      const Eigen::MatrixXd& output_cotangent,
                      Eigen::MatrixXd* input_cotangent = nullptr, bool skip_parameters = false);

/// Scalar loss of the network output together with its gradient.
struct ScalarLoss {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

struct GradientResult {
  MlpGradients parameters;
  Eigen::VectorXd input;
  double loss = 0.0;
};

/// One forward + one backward pass yielding both parameter and input
/// gradients of loss(net(input)).
GradientResult grad(const Mlp& net, const Eigen::VectorXd& input, const ScalarLoss& loss);

}  // namespace ovd
