#include "ovd/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ovd {

namespace {

double clamp_phi(double phi) { return std::clamp(phi, kPhiFloor, 1.0); }

double current_cdf_value(const ExplorationConfig& config, const GaussianSpec& gaussian_z,
                         const QuantileDistribution& quantile_z, double x) {
  return config.z_mode == ZMode::kGaussian ? cdf(gaussian_z, x) : cdf(quantile_z, x);
}

}  // namespace

double ensemble_mean(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2) {
  if (q1.size() != q2.size() || q1.size() == 0)
    throw std::invalid_argument("ensemble_mean: quantile length mismatch");
  return (q1.sum() + q2.sum()) / (2.0 * static_cast<double>(q1.size()));
}

GaussianSpec build_ovd(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                       const CriticEnsemble& ensemble, double beta) {
  const Eigen::VectorXd q1 = ensemble.online_quantiles(0, state, action);
  const Eigen::VectorXd q2 = ensemble.online_quantiles(1, state, action);
  GaussianSpec spec;
  spec.mean = ensemble_mean(q1, q2) + beta * epistemic_std(q1, q2);
  spec.std = std::max(aleatoric_std(q1, q2), kSigmaFloor);
  return spec;
}

GaussianSpec build_current_gaussian(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                                    const CriticEnsemble& ensemble, double beta,
                                    bool pessimistic_mean) {
  const Eigen::VectorXd q1 = ensemble.online_quantiles(0, state, action);
  const Eigen::VectorXd q2 = ensemble.online_quantiles(1, state, action);
  GaussianSpec spec;
  spec.mean = ensemble_mean(q1, q2) - (pessimistic_mean ? beta * epistemic_std(q1, q2) : 0.0);
  spec.std = std::max(aleatoric_std(q1, q2), kSigmaFloor);
  return spec;
}

QuantileDistribution build_current_quantile(const Eigen::VectorXd& state,
                                            const Eigen::VectorXd& action,
                                            const CriticEnsemble& ensemble) {
  return make_quantile_distribution(ensemble.online_quantiles(0, state, action)
                                        .cwiseMin(ensemble.online_quantiles(1, state, action)));
}

double cdf(const GaussianSpec& dist, double x) {
  // Phi((x - mu) / sigma) through erfc, which stays accurate in the lower tail
  const double t = (x - dist.mean) / dist.std;
  return 0.5 * std::erfc(-t * 0.70710678118654752440);
}

double cdf(const QuantileDistribution& dist, double x) {
  const Eigen::Index n = dist.values.size();
  Eigen::Index below = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (dist.values[i] <= x) ++below;
  return static_cast<double>(below) / static_cast<double>(n);
}

double optimism_multiplier(double phi, double c_norm) {
  return std::log(clamp_phi(phi) / c_norm) + 1.0;
}

OvdGradient ovd_value_gradient(const Eigen::VectorXd& state,
                               const Eigen::VectorXd& pre_squash_action,
                               const CriticEnsemble& ensemble, double beta, double eps_bar) {
  const Eigen::VectorXd action = pre_squash_action.array().tanh();
  const Eigen::MatrixXd joined = join_state_action(state, action);

  GradientTape tape1 = forward_tape(ensemble.online[0], joined);
  GradientTape tape2 = forward_tape(ensemble.online[1], joined);

  OvdGradient out;
  out.q1 = tape1.output().col(0);
  out.q2 = tape2.output().col(0);
  const Eigen::Index n = out.q1.size();
  out.uncertainty.epistemic_std = epistemic_std(out.q1, out.q2);
  out.uncertainty.aleatoric_std = aleatoric_std(out.q1, out.q2);
  out.mu = ensemble_mean(out.q1, out.q2);
  out.ovd_mean = out.mu + beta * out.uncertainty.epistemic_std;

  // Cotangents of mu_ovd + eps_bar * sigma_aleatoric with respect to each
  // critic's quantile outputs.
  const double inv2n = 1.0 / (2.0 * static_cast<double>(n));
  Eigen::VectorXd cot1 = Eigen::VectorXd::Constant(n, inv2n);
  Eigen::VectorXd cot2 = cot1;

  const double sig_epi = out.uncertainty.epistemic_std;
  if (beta != 0.0 && sig_epi > 1e-12) {
    // sigma_epi = sqrt((1/4N) sum (q1 - q2)^2)
    const Eigen::VectorXd diff = out.q1 - out.q2;
    const double scale = beta / (4.0 * static_cast<double>(n) * sig_epi);
    cot1 += scale * diff;
    cot2 -= scale * diff;
  }
  const double sig_alea = out.uncertainty.aleatoric_std;
  if (eps_bar != 0.0 && sig_alea > kSigmaFloor) {
    // sigma_alea = sqrt((1/N) sum (m_i - mbar)^2) with m_i the critic means;
    // below the floor the sampled std is the constant floor, so no gradient.
    const Eigen::VectorXd means = (out.q1 + out.q2) / 2.0;
    const Eigen::VectorXd centered = means.array() - means.mean();
    const double scale = eps_bar / (2.0 * static_cast<double>(n) * sig_alea);
    cot1 += scale * centered;
    cot2 += scale * centered;
  }

  Eigen::MatrixXd din1, din2;
  backward(ensemble.online[0], tape1, cot1, &din1, /*skip_parameters=*/true);
  backward(ensemble.online[1], tape2, cot2, &din2, /*skip_parameters=*/true);
  const Eigen::Index a_dim = action.size();
  const Eigen::VectorXd grad_action =
      din1.col(0).tail(a_dim) + din2.col(0).tail(a_dim);
  // chain through the squash: d tanh(u)/du = 1 - tanh(u)^2
  out.grad_pre_squash = grad_action.array() * (1.0 - action.array().square());
  return out;
}

double exploration_ability_at(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                              const CriticEnsemble& ensemble, const ExplorationConfig& config,
                              RngStream& rng, int value_samples) {
  const Eigen::VectorXd q1 = ensemble.online_quantiles(0, state, action);
  const Eigen::VectorXd q2 = ensemble.online_quantiles(1, state, action);
  const double mu = ensemble_mean(q1, q2);
  const double sig_epi = epistemic_std(q1, q2);
  const double sig_alea = std::max(aleatoric_std(q1, q2), kSigmaFloor);

  const GaussianSpec ovd{mu + config.beta * sig_epi, sig_alea};
  const GaussianSpec gaussian_z{
      mu - (config.pessimistic_mean ? config.beta * sig_epi : 0.0), sig_alea};
  QuantileDistribution quantile_z;
  if (config.z_mode == ZMode::kQuantile)
    quantile_z = make_quantile_distribution(q1.cwiseMin(q2));

  const auto term = [&](double z) {
    const double phi = current_cdf_value(config, gaussian_z, quantile_z, z);
    return phi * std::log(clamp_phi(phi) / config.c_norm);
  };

  if (value_samples <= 0) return term(ovd.mean) / config.c_norm;
  double acc = 0.0;
  for (int i = 0; i < value_samples; ++i) acc += term(ovd.mean + ovd.std * rng.normal());
  return acc / (config.c_norm * static_cast<double>(value_samples));
}

double exploration_ability(const Eigen::VectorXd& state, const PolicyHead& policy,
                           const CriticEnsemble& ensemble, const ExplorationConfig& config,
                           RngStream& rng, int action_samples, int value_samples) {
  if (action_samples < 1)
    throw std::invalid_argument("exploration_ability: needs at least one action sample");
  const PolicyEval eval = policy.evaluate(state);
  double acc = 0.0;
  for (int i = 0; i < action_samples; ++i) {
    Eigen::VectorXd pre(eval.mu.size());
    for (Eigen::Index d = 0; d < pre.size(); ++d)
      pre[d] = eval.mu[d] + eval.sigma[d] * rng.normal();
    acc += exploration_ability_at(state, squash(pre), ensemble, config, rng, value_samples);
  }
  return acc / static_cast<double>(action_samples);
}

BehaviorPolicyResult behavior_policy(const Eigen::VectorXd& state, const Eigen::VectorXd& mu_phi,
                                     const Eigen::VectorXd& sigma_phi,
                                     const CriticEnsemble& ensemble,
                                     const ExplorationConfig& config, RngStream& rng) {
  BehaviorPolicyResult result;
  result.mean = mu_phi;
  result.std = sigma_phi;
  if (config.alpha == 0.0) return result;  // reduces to the head exactly

  // (1/K) sum_i d(mu_ovd + sigma_alea eps_i)/da collapses to a single backward
  // pass weighted by the mean of the eps draws; K = 0 keeps z at the OVD mean.
  double eps_bar = 0.0;
  if (config.k_samples > 0) {
    for (int i = 0; i < config.k_samples; ++i) eps_bar += rng.normal();
    eps_bar /= static_cast<double>(config.k_samples);
  }

  const OvdGradient g = ovd_value_gradient(state, mu_phi, ensemble, config.beta, eps_bar);
  result.uncertainty = g.uncertainty;

  double phi;
  if (config.z_mode == ZMode::kGaussian) {
    const GaussianSpec z_pi{
        g.mu - (config.pessimistic_mean ? config.beta * g.uncertainty.epistemic_std : 0.0),
        std::max(g.uncertainty.aleatoric_std, kSigmaFloor)};
    phi = cdf(z_pi, g.ovd_mean);
  } else {
    phi = cdf(make_quantile_distribution(g.q1.cwiseMin(g.q2)), g.ovd_mean);
  }
  result.m = optimism_multiplier(phi, config.c_norm);
  result.negative_m = result.m < 0.0;

  const Eigen::VectorXd shift = config.alpha * result.m * g.grad_pre_squash;
  if (!shift.allFinite()) {
    result.gradient_fallback = true;
    return result;
  }
  result.mean = mu_phi + shift;
  result.shift_norm = shift.norm();
  return result;
}

}  // namespace ovd
