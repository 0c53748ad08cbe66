#pragma once

#include "ovd/mlp.hpp"

namespace ovd {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction; one moment pair per parameter tensor.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const Mlp& params, AdamConfig config);

  /// Applies one update in place and increments the step counter.
  void step(Mlp& params, const MlpGradients& grads);

  long step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Eigen::MatrixXd> m_weight_, v_weight_;
  std::vector<Eigen::VectorXd> m_bias_, v_bias_;
  long step_ = 0;
};

}  // namespace ovd
