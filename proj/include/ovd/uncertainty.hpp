#pragma once

#include "ovd/critic.hpp"

namespace ovd {

struct UncertaintyEstimate {
  double epistemic_std = 0.0;
  double aleatoric_std = 0.0;
};

/// Ensemble disagreement: sqrt of the mean over quantile indices of the
/// across-critic population variance.
double epistemic_std(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2);

/// Value-distribution spread: sqrt of the population variance over quantile
/// indices of the per-quantile critic means.
double aleatoric_std(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2);

double epistemic_std(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                     const CriticEnsemble& ensemble);
double aleatoric_std(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                     const CriticEnsemble& ensemble);
UncertaintyEstimate uncertainty_at(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                                   const CriticEnsemble& ensemble);

}  // namespace ovd
