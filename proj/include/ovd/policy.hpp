#pragma once

#include <Eigen/Core>

#include "ovd/mlp.hpp"

namespace ovd {

// Clamp range for the policy log-std head: sigma in [1e-6, 10].
inline constexpr double kLogStdMin = -13.815510557964274;  // ln 1e-6
inline constexpr double kLogStdMax = 2.302585092994046;    // ln 10

struct PolicyEval {
  Eigen::VectorXd mu;       // pre-squash mean
  Eigen::VectorXd log_std;  // clamped
  Eigen::VectorXd sigma;
};

struct PolicyBatchEval {
  GradientTape tape;            // tape of the policy net over the state batch
  Eigen::MatrixXd mu;           // A x B
  Eigen::MatrixXd log_std_raw;  // before clamping, for gradient gating
  Eigen::MatrixXd sigma;        // exp(clamped log-std)
};

/// Diagonal Gaussian head with tanh squashing; the net maps state to
/// [mu, log_std] stacked.
class PolicyHead {
 public:
  PolicyHead() = default;
  PolicyHead(int state_dim, int action_dim, const std::vector<int>& hidden, RngStream& rng);

  int state_dim() const { return net_.input_dim(); }
  int action_dim() const { return action_dim_; }

  PolicyEval evaluate(const Eigen::VectorXd& state) const;
  PolicyBatchEval evaluate_batch(const Eigen::MatrixXd& states) const;

  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }

 private:
  Mlp net_;
  int action_dim_ = 0;
};

Eigen::VectorXd squash(const Eigen::VectorXd& pre);
Eigen::VectorXd unsquash(const Eigen::VectorXd& action);

/// log(1 - tanh(u)^2) in a form stable for large |u|.
double log1m_tanh_sq(double u);

/// Log density of a = tanh(u) with u ~ N(mu, diag sigma^2), including the
/// change-of-variables correction.
double squashed_log_prob(const Eigen::VectorXd& pre, const Eigen::VectorXd& mu,
                         const Eigen::VectorXd& sigma);

/// Batch form over columns; pre/mu/sigma are A x B, result is 1 x B.
Eigen::RowVectorXd squashed_log_prob_batch(const Eigen::MatrixXd& pre, const Eigen::MatrixXd& mu,
                                           const Eigen::MatrixXd& sigma);

}  // namespace ovd
