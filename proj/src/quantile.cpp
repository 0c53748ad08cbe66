#include "ovd/quantile.hpp"

#include <stdexcept>

namespace ovd {

Eigen::VectorXd quantile_midpoints(int n) {
  if (n < 1) throw std::invalid_argument("quantile_midpoints: n must be at least 1");
  Eigen::VectorXd fractions(n);
  for (int i = 0; i < n; ++i) fractions[i] = (static_cast<double>(i) + 0.5) / n;
  return fractions;
}

QuantileDistribution make_quantile_distribution(Eigen::VectorXd values) {
  QuantileDistribution dist;
  dist.fractions = quantile_midpoints(static_cast<int>(values.size()));
  dist.values = std::move(values);
  return dist;
}

double pinball_loss(const Eigen::VectorXd& predicted, const Eigen::VectorXd& fractions,
                    const Eigen::VectorXd& targets) {
  const Eigen::Index n = predicted.size();
  if (fractions.size() != n || targets.size() != n)
    throw std::invalid_argument("pinball_loss: length mismatch");
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double tau = fractions[j];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = targets[i] - predicted[j];
      total += u * (u < 0.0 ? tau - 1.0 : tau);
    }
  }
  return total / static_cast<double>(n);
}

Eigen::VectorXd pinball_gradient(const Eigen::VectorXd& predicted,
                                 const Eigen::VectorXd& fractions,
                                 const Eigen::VectorXd& targets) {
  const Eigen::Index n = predicted.size();
  if (fractions.size() != n || targets.size() != n)
    throw std::invalid_argument("pinball_gradient: length mismatch");
  Eigen::VectorXd grad(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    int below = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (targets[i] < predicted[j]) ++below;
    grad[j] = (static_cast<double>(below) - static_cast<double>(n) * fractions[j]) /
              static_cast<double>(n);
  }
  return grad;
}

Eigen::MatrixXd pinball_gradient_batch(const Eigen::MatrixXd& predicted,
                                       const Eigen::VectorXd& fractions,
                                       const Eigen::MatrixXd& targets) {
  const Eigen::Index n = predicted.rows();
  const Eigen::Index b = predicted.cols();
  if (fractions.size() != n || targets.rows() != n || targets.cols() != b)
    throw std::invalid_argument("pinball_gradient_batch: shape mismatch");
  Eigen::MatrixXd grad(n, b);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(b));
  for (Eigen::Index col = 0; col < b; ++col) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double q = predicted(j, col);
      int below = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (targets(i, col) < q) ++below;
      grad(j, col) = (static_cast<double>(below) - static_cast<double>(n) * fractions[j]) * scale;
    }
  }
  return grad;
}

}  // namespace ovd
