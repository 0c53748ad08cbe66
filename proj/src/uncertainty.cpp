#include "ovd/uncertainty.hpp"

#include <cmath>
#include <stdexcept>

namespace ovd {

double epistemic_std(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2) {
  if (q1.size() != q2.size() || q1.size() == 0)
    throw std::invalid_argument("epistemic_std: quantile length mismatch");
  // two-member population variance per quantile is (q1 - q2)^2 / 4
  const double var = (q1 - q2).array().square().mean() / 4.0;
  return std::sqrt(var);
}

double aleatoric_std(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2) {
  if (q1.size() != q2.size() || q1.size() == 0)
    throw std::invalid_argument("aleatoric_std: quantile length mismatch");
  const Eigen::ArrayXd means = (q1 + q2).array() / 2.0;
  const double var = (means - means.mean()).square().mean();
  return std::sqrt(var);
}

double epistemic_std(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                     const CriticEnsemble& ensemble) {
  return epistemic_std(ensemble.online_quantiles(0, state, action),
                       ensemble.online_quantiles(1, state, action));
}

double aleatoric_std(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                     const CriticEnsemble& ensemble) {
  return aleatoric_std(ensemble.online_quantiles(0, state, action),
                       ensemble.online_quantiles(1, state, action));
}

UncertaintyEstimate uncertainty_at(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                                   const CriticEnsemble& ensemble) {
  const Eigen::VectorXd q1 = ensemble.online_quantiles(0, state, action);
  const Eigen::VectorXd q2 = ensemble.online_quantiles(1, state, action);
  return {epistemic_std(q1, q2), aleatoric_std(q1, q2)};
}

}  // namespace ovd
