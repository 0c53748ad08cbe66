#pragma once

#include <Eigen/Core>

namespace ovd {

/// Quantile midpoints (i - 0.5)/n for i = 1..n.
Eigen::VectorXd quantile_midpoints(int n);

/// N return values at the fixed quantile midpoints.
struct QuantileDistribution {
  Eigen::VectorXd values;
  Eigen::VectorXd fractions;
};

QuantileDistribution make_quantile_distribution(Eigen::VectorXd values);

/// (1/N) sum_i sum_j rho_{tau_j}(target_i - predicted_j), with the pinball
/// kernel rho_tau(u) = u (tau - 1{u<0}).
double pinball_loss(const Eigen::VectorXd& predicted, const Eigen::VectorXd& fractions,
                    const Eigen::VectorXd& targets);

/// d pinball_loss / d predicted. At a zero residual the subgradient -tau is
/// used.
Eigen::VectorXd pinball_gradient(const Eigen::VectorXd& predicted,
                                 const Eigen::VectorXd& fractions,
                                 const Eigen::VectorXd& targets);

/// Batch form: predicted and targets are N x B; the result carries the full
/// 1/(N*B) batch-mean scaling.
Eigen::MatrixXd pinball_gradient_batch(const Eigen::MatrixXd& predicted,
                                       const Eigen::VectorXd& fractions,
                                       const Eigen::MatrixXd& targets);

}  // namespace ovd
