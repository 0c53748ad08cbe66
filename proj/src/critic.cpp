#include "ovd/critic.hpp"

#include <stdexcept>

namespace ovd {

CriticEnsemble CriticEnsemble::make(int state_dim, int action_dim, int n_quantiles,
                                    const std::vector<int>& hidden, RngStream& rng) {
  if (state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("critic: dimensions must be positive");
  CriticEnsemble ens;
  ens.state_dim = state_dim;
  ens.action_dim = action_dim;
  ens.n_quantiles = n_quantiles;
  ens.fractions = quantile_midpoints(n_quantiles);
  std::vector<int> dims;
  dims.push_back(state_dim + action_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(n_quantiles);
  for (int k = 0; k < 2; ++k) {
    ens.online[k] = Mlp::random_init(dims, Activation::kTanh, Activation::kIdentity, rng);
    ens.target[k] = ens.online[k];
  }
  return ens;
}

Eigen::VectorXd CriticEnsemble::online_quantiles(int k, const Eigen::VectorXd& state,
                                                 const Eigen::VectorXd& action) const {
  return online[static_cast<std::size_t>(k)].forward(join_state_action(state, action));
}

Eigen::VectorXd CriticEnsemble::target_quantiles(int k, const Eigen::VectorXd& state,
                                                 const Eigen::VectorXd& action) const {
  return target[static_cast<std::size_t>(k)].forward(join_state_action(state, action));
}

Eigen::VectorXd join_state_action(const Eigen::VectorXd& state, const Eigen::VectorXd& action) {
  Eigen::VectorXd joined(state.size() + action.size());
  joined << state, action;
  return joined;
}

Eigen::MatrixXd join_state_action(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) {
  if (states.cols() != actions.cols())
    throw std::invalid_argument("join_state_action: batch size mismatch");
  Eigen::MatrixXd joined(states.rows() + actions.rows(), states.cols());
  joined.topRows(states.rows()) = states;
  joined.bottomRows(actions.rows()) = actions;
  return joined;
}

Eigen::VectorXd td_target_quantiles(double reward, bool done, double gamma, double entropy_coeff,
                                    double log_pi_next, const Eigen::VectorXd& next_target_q1,
                                    const Eigen::VectorXd& next_target_q2) {
  if (next_target_q1.size() != next_target_q2.size())
    throw std::invalid_argument("td_target: critic output length mismatch");
  const double bootstrap = done ? 0.0 : gamma;
  Eigen::VectorXd target =
      (reward +
       bootstrap * (next_target_q1.cwiseMin(next_target_q2).array() - entropy_coeff * log_pi_next))
          .matrix();
  if (!target.allFinite()) throw std::runtime_error("td_target: non-finite target quantiles");
  return target;
}

Eigen::VectorXd td_target_quantiles(const Transition& tr, const CriticEnsemble& ensemble,
                                    const PolicyHead& policy, double gamma, double entropy_coeff,
                                    RngStream& rng) {
  const PolicyEval eval = policy.evaluate(tr.next_state);
  Eigen::VectorXd pre(eval.mu.size());
  for (Eigen::Index d = 0; d < pre.size(); ++d)
    pre[d] = eval.mu[d] + eval.sigma[d] * rng.normal();
  const Eigen::VectorXd next_action = squash(pre);
  const double log_pi = squashed_log_prob(pre, eval.mu, eval.sigma);
  return td_target_quantiles(tr.reward, tr.done, gamma, entropy_coeff, log_pi,
                             ensemble.target_quantiles(0, tr.next_state, next_action),
                             ensemble.target_quantiles(1, tr.next_state, next_action));
}

double q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
               const CriticEnsemble& ensemble) {
  const double q1 = ensemble.online_quantiles(0, state, action).mean();
  const double q2 = ensemble.online_quantiles(1, state, action).mean();
  return q1 < q2 ? q1 : q2;
}

void soft_update(Mlp& target, const Mlp& online, double smoothing) {
  if (smoothing < 0.0 || smoothing > 1.0)
    throw std::invalid_argument("soft_update: smoothing must be within [0, 1]");
  if (target.layer_count() != online.layer_count())
    throw std::invalid_argument("soft_update: network shapes differ");
  for (std::size_t i = 0; i < target.layer_count(); ++i) {
    target.layers()[i].weight =
        smoothing * online.layers()[i].weight + (1.0 - smoothing) * target.layers()[i].weight;
    target.layers()[i].bias =
        smoothing * online.layers()[i].bias + (1.0 - smoothing) * target.layers()[i].bias;
  }
}

}  // namespace ovd
