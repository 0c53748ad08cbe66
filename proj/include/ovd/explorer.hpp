#pragma once

#include "ovd/critic.hpp"
#include "ovd/policy.hpp"
#include "ovd/uncertainty.hpp"

namespace ovd {

inline constexpr double kSigmaFloor = 1e-6;  // floor on all Gaussian stds
inline constexpr double kPhiFloor = 1e-6;    // CDF clamp before taking logs

/// Scalar Gaussian over return values.
struct GaussianSpec {
  double mean = 0.0;
  double std = kSigmaFloor;
};

enum class ZMode { kGaussian, kQuantile };

struct ExplorationConfig {
  double alpha = 0.05;    // exploration ratio / gradient step size
  double beta = 3.2;      // uncertainty ratio
  double c_norm = 0.5;    // normalization constant C
  int k_samples = 4;      // samples of the optimistic value; 0 = its mean
  ZMode z_mode = ZMode::kGaussian;
  bool pessimistic_mean = true;  // false disables the pessimistic shift (the "(m)" variant)
};

/// Mean over quantiles and both online critics.
double ensemble_mean(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2);

/// Optimistic value distribution: N(mu + beta * sigma_epistemic, sigma_aleatoric^2).
GaussianSpec build_ovd(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                       const CriticEnsemble& ensemble, double beta);

/// Current return distribution, Gaussian form: the mean is shifted down by
/// beta * sigma_epistemic unless `pessimistic_mean` is off.
GaussianSpec build_current_gaussian(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                                    const CriticEnsemble& ensemble, double beta,
                                    bool pessimistic_mean = true);

/// Current return distribution, quantile form: per-quantile min over critics.
QuantileDistribution build_current_quantile(const Eigen::VectorXd& state,
                                            const Eigen::VectorXd& action,
                                            const CriticEnsemble& ensemble);

double cdf(const GaussianSpec& dist, double x);
double cdf(const QuantileDistribution& dist, double x);

/// m = log(Phi / C) + 1 with Phi clamped to [kPhiFloor, 1].
double optimism_multiplier(double phi, double c_norm);

/// (1/C) E[Phi(z) log(Phi(z)/C)] at one action; `value_samples` = 0 evaluates
/// the single deterministic z = OVD mean. Diagnostic; not in the update path.
double exploration_ability_at(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                              const CriticEnsemble& ensemble, const ExplorationConfig& config,
                              RngStream& rng, int value_samples);

/// Monte-Carlo over actions drawn from the squashed policy at `state`.
double exploration_ability(const Eigen::VectorXd& state, const PolicyHead& policy,
                           const CriticEnsemble& ensemble, const ExplorationConfig& config,
                           RngStream& rng, int action_samples, int value_samples);

/// Value statistics at (state, tanh(pre_squash_action)) and the gradient of
/// mu_ovd + eps_bar * sigma_aleatoric with respect to the pre-squash action.
struct OvdGradient {
  double mu = 0.0;       // ensemble mean mu(s, a)
  double ovd_mean = 0.0;  // mu + beta * sigma_epistemic
  UncertaintyEstimate uncertainty;
  Eigen::VectorXd q1, q2;  // online critic quantiles at (s, a)
  Eigen::VectorXd grad_pre_squash;
};

OvdGradient ovd_value_gradient(const Eigen::VectorXd& state,
                               const Eigen::VectorXd& pre_squash_action,
                               const CriticEnsemble& ensemble, double beta, double eps_bar);

struct BehaviorPolicyResult {
  Eigen::VectorXd mean;  // pre-squash
  Eigen::VectorXd std;
  double m = 0.0;
  double shift_norm = 0.0;
  UncertaintyEstimate uncertainty;
  bool gradient_fallback = false;  // non-finite gradient, mean left at the head
  bool negative_m = false;         // Phi < C/e reversed the shift direction
};

/// One gradient-ascent step from the policy head mean, in pre-squash action
/// space. alpha = 0 returns the head bit-identically; the covariance is always
/// the head's.
BehaviorPolicyResult behavior_policy(const Eigen::VectorXd& state, const Eigen::VectorXd& mu_phi,
                                     const Eigen::VectorXd& sigma_phi,
                                     const CriticEnsemble& ensemble,
                                     const ExplorationConfig& config, RngStream& rng);

}  // namespace ovd
