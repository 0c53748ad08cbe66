#pragma once

#include <array>

#include "ovd/mlp.hpp"
#include "ovd/policy.hpp"
#include "ovd/quantile.hpp"
#include "ovd/replay.hpp"

namespace ovd {

/// Two online quantile critics plus target copies. Each critic maps the
/// joined (state, action) vector to N quantile values at fixed midpoints;
/// targets start as exact copies of the online networks.
struct CriticEnsemble {
  std::array<Mlp, 2> online;
  std::array<Mlp, 2> target;
  Eigen::VectorXd fractions;
  int state_dim = 0;
  int action_dim = 0;
  int n_quantiles = 0;

  static CriticEnsemble make(int state_dim, int action_dim, int n_quantiles,
                             const std::vector<int>& hidden, RngStream& rng);

  Eigen::VectorXd online_quantiles(int k, const Eigen::VectorXd& state,
                                   const Eigen::VectorXd& action) const;
  Eigen::VectorXd target_quantiles(int k, const Eigen::VectorXd& state,
                                   const Eigen::VectorXd& action) const;
};

Eigen::VectorXd join_state_action(const Eigen::VectorXd& state, const Eigen::VectorXd& action);
Eigen::MatrixXd join_state_action(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions);

/// Distributional soft TD target with the per-quantile elementwise min over
/// the two target critics:
///   target_i = r + gamma (1 - done) (min_k Z_i^k - entropy_coeff log pi).
Eigen::VectorXd td_target_quantiles(double reward, bool done, double gamma, double entropy_coeff,
                                    double log_pi_next, const Eigen::VectorXd& next_target_q1,
                                    const Eigen::VectorXd& next_target_q2);

/// Convenience form that samples a' from the policy at the next state.
Eigen::VectorXd td_target_quantiles(const Transition& tr, const CriticEnsemble& ensemble,
                                    const PolicyHead& policy, double gamma, double entropy_coeff,
                                    RngStream& rng);

/// Min over the two online critics of the mean over quantiles.
double q_value(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
               const CriticEnsemble& ensemble);

/// target <- smoothing * online + (1 - smoothing) * target, entrywise.
void soft_update(Mlp& target, const Mlp& online, double smoothing);

}  // namespace ovd
