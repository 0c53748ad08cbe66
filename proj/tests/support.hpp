// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "ovd/critic.hpp"
#include "ovd/mlp.hpp"

namespace ovd::testing {

/// Standard normal CDF for oracle use.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

/// Inverse standard normal CDF by bisection on erfc; |error| < 1e-12.
inline double normal_quantile(double p) {
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Central finite difference of a scalar function at x.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative_error(double analytic, double numeric) {
  const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
  return std::abs(analytic - numeric) / denom;
}

/// Random network with small dimensions and tanh hidden layers.
inline Mlp random_small_net(RngStream& rng, int in_dim, int out_dim) {
  std::vector<int> dims{in_dim};
  const int n_hidden = 1 + static_cast<int>(rng.uniform_index(2));
  for (int i = 0; i < n_hidden; ++i) dims.push_back(2 + static_cast<int>(rng.uniform_index(6)));
  dims.push_back(out_dim);
  Mlp net = Mlp::random_init(dims, Activation::kTanh, Activation::kIdentity, rng);
  for (auto& layer : net.layers()) {
    for (int c = 0; c < layer.weight.cols(); ++c)
      for (int r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) += 0.3 * rng.normal();
    for (int r = 0; r < layer.bias.size(); ++r) layer.bias[r] = 0.2 * rng.normal();
  }
  return net;
}

/// Max relative error between the analytic gradients of loss(net(x)) and
/// central finite differences over every parameter and input entry.
inline double gradient_check(const Mlp& net, const Eigen::VectorXd& input, const ScalarLoss& loss,
                             double h = 1e-4) {
  const GradientResult result = grad(net, input, loss);
  double worst = 0.0;

  Mlp probe = net;
  const auto loss_at = [&](const Mlp& n, const Eigen::VectorXd& x) { return loss.value(n.forward(x)); };
  for (std::size_t li = 0; li < probe.layers().size(); ++li) {
    auto& layer = probe.layers()[li];
    for (int c = 0; c < layer.weight.cols(); ++c) {
      for (int r = 0; r < layer.weight.rows(); ++r) {
        const double saved = layer.weight(r, c);
        layer.weight(r, c) = saved + h;
        const double up = loss_at(probe, input);
        layer.weight(r, c) = saved - h;
        const double down = loss_at(probe, input);
        layer.weight(r, c) = saved;
        const double numeric = (up - down) / (2.0 * h);
        worst = std::max(worst, relative_error(result.parameters.weight[li](r, c), numeric));
      }
    }
    for (int r = 0; r < layer.bias.size(); ++r) {
      const double saved = layer.bias[r];
      layer.bias[r] = saved + h;
      const double up = loss_at(probe, input);
      layer.bias[r] = saved - h;
      const double down = loss_at(probe, input);
      layer.bias[r] = saved;
      const double numeric = (up - down) / (2.0 * h);
      worst = std::max(worst, relative_error(result.parameters.bias[li][r], numeric));
    }
  }
  Eigen::VectorXd x = input;
  for (int i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = loss_at(net, x);
    x[i] = saved - h;
    const double down = loss_at(net, x);
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    worst = std::max(worst, relative_error(result.input[i], numeric));
  }
  return worst;
}

/// Ensemble whose critics are single linear layers: quantiles = W [s; a] + b.
/// Zero weights give constant critics.
inline ovd::CriticEnsemble linear_ensemble(int state_dim, int action_dim,
                                           const Eigen::MatrixXd& w1, const Eigen::VectorXd& b1,
                                           const Eigen::MatrixXd& w2, const Eigen::VectorXd& b2) {
  ovd::CriticEnsemble ens;
  ens.state_dim = state_dim;
  ens.action_dim = action_dim;
  ens.n_quantiles = static_cast<int>(b1.size());
  ens.fractions = ovd::quantile_midpoints(ens.n_quantiles);
  ens.online[0] = Mlp({DenseLayer{w1, b1, Activation::kIdentity}});
  ens.online[1] = Mlp({DenseLayer{w2, b2, Activation::kIdentity}});
  ens.target[0] = ens.online[0];
  ens.target[1] = ens.online[1];
  return ens;
}

/// Critics with constant per-quantile outputs, independent of (s, a).
inline ovd::CriticEnsemble constant_ensemble(int state_dim, int action_dim,
                                             const Eigen::VectorXd& values1,
                                             const Eigen::VectorXd& values2) {
  const Eigen::MatrixXd zero =
      Eigen::MatrixXd::Zero(values1.size(), state_dim + action_dim);
  return linear_ensemble(state_dim, action_dim, zero, values1, zero, values2);
}

/// Smooth loss with random linear and quadratic coefficients.
inline ScalarLoss random_quadratic_loss(int out_dim, RngStream& rng) {
  auto lin = std::make_shared<Eigen::VectorXd>(out_dim);
  auto quad = std::make_shared<Eigen::VectorXd>(out_dim);
  for (int i = 0; i < out_dim; ++i) {
    (*lin)[i] = rng.normal();
    (*quad)[i] = 0.5 + rng.uniform();
  }
  ScalarLoss loss;
  loss.value = [lin, quad](const Eigen::VectorXd& y) {
    return (lin->array() * y.array() + quad->array() * y.array().square()).sum();
  };
  loss.gradient = [lin, quad](const Eigen::VectorXd& y) {
    return Eigen::VectorXd(lin->array() + 2.0 * quad->array() * y.array());
  };
  return loss;
}

}  // namespace ovd::testing
