#include "ovd/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ovd {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2*pi)
}

PolicyHead::PolicyHead(int state_dim, int action_dim, const std::vector<int>& hidden,
                       RngStream& rng)
    : action_dim_(action_dim) {
  if (state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("policy: dimensions must be positive");
  std::vector<int> dims;
  dims.push_back(state_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(2 * action_dim);
  net_ = Mlp::random_init(dims, Activation::kTanh, Activation::kIdentity, rng);
}

PolicyEval PolicyHead::evaluate(const Eigen::VectorXd& state) const {
  const Eigen::VectorXd out = net_.forward(state);
  PolicyEval eval;
  eval.mu = out.head(action_dim_);
  eval.log_std = out.tail(action_dim_).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  eval.sigma = eval.log_std.array().exp();
  return eval;
}

PolicyBatchEval PolicyHead::evaluate_batch(const Eigen::MatrixXd& states) const {
  PolicyBatchEval eval;
  eval.tape = forward_tape(net_, states);
  const Eigen::MatrixXd& out = eval.tape.output();
  eval.mu = out.topRows(action_dim_);
  eval.log_std_raw = out.bottomRows(action_dim_);
  eval.sigma = eval.log_std_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax).array().exp();
  return eval;
}

Eigen::VectorXd squash(const Eigen::VectorXd& pre) { return pre.array().tanh(); }

Eigen::VectorXd unsquash(const Eigen::VectorXd& action) {
  Eigen::VectorXd pre(action.size());
  for (Eigen::Index i = 0; i < action.size(); ++i) {
    const double a = std::clamp(action[i], -1.0 + 1e-12, 1.0 - 1e-12);
    pre[i] = std::atanh(a);
  }
  return pre;
}

double log1m_tanh_sq(double u) {
  // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u))
  const double x = -2.0 * u;
  const double softplus = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  return 2.0 * (0.69314718055994530942 - u - softplus);
}

double squashed_log_prob(const Eigen::VectorXd& pre, const Eigen::VectorXd& mu,
                         const Eigen::VectorXd& sigma) {
  if (pre.size() != mu.size() || pre.size() != sigma.size())
    throw std::invalid_argument("squashed_log_prob: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index d = 0; d < pre.size(); ++d) {
    const double z = (pre[d] - mu[d]) / sigma[d];
    total += -kHalfLog2Pi - std::log(sigma[d]) - 0.5 * z * z - log1m_tanh_sq(pre[d]);
  }
  return total;
}

Eigen::RowVectorXd squashed_log_prob_batch(const Eigen::MatrixXd& pre, const Eigen::MatrixXd& mu,
                                           const Eigen::MatrixXd& sigma) {
  const Eigen::Index a = pre.rows();
  const Eigen::Index b = pre.cols();
  if (mu.rows() != a || mu.cols() != b || sigma.rows() != a || sigma.cols() != b)
    throw std::invalid_argument("squashed_log_prob_batch: shape mismatch");
  Eigen::RowVectorXd out(b);
  for (Eigen::Index col = 0; col < b; ++col) {
    double total = 0.0;
    for (Eigen::Index d = 0; d < a; ++d) {
      const double z = (pre(d, col) - mu(d, col)) / sigma(d, col);
      total += -kHalfLog2Pi - std::log(sigma(d, col)) - 0.5 * z * z - log1m_tanh_sq(pre(d, col));
    }
    out[col] = total;
  }
  return out;
}

}  // namespace ovd
