#include <cmath>

#include "doctest.h"
#include "ovd/explorer.hpp"
#include "support.hpp"

using namespace ovd;

namespace {

const Eigen::VectorXd kZero1 = Eigen::VectorXd::Zero(1);

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * 2.5066282746310005);
}

// Dense trapezoid integration of (1/C) E_z[Phi(z) log(Phi(z)/C)] with
// z ~ N(ovd) and Phi the CDF of z_pi.
double ability_quadrature(const GaussianSpec& ovd, const GaussianSpec& z_pi, double c_norm) {
  const int n = 40001;
  const double lo = ovd.mean - 8.0 * ovd.std;
  const double hi = ovd.mean + 8.0 * ovd.std;
  const double h = (hi - lo) / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = lo + h * i;
    const double phi = testing::normal_cdf((z - z_pi.mean) / z_pi.std);
    const double term = phi * std::log(std::max(phi, kPhiFloor) / c_norm);
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += w * normal_pdf(z, ovd.mean, ovd.std) * term;
  }
  return sum * h / c_norm;
}

}  // namespace

TEST_CASE("ovd construction") {
  // constant critics 1.5 / 0.5: mu = 1, epistemic = 0.5, aleatoric = 0
  auto ens = testing::constant_ensemble(1, 1, Eigen::VectorXd::Constant(3, 1.5),
                                        Eigen::VectorXd::Constant(3, 0.5));
  CHECK(build_ovd(kZero1, kZero1, ens, 0.0).mean == doctest::Approx(1.0));
  CHECK(build_ovd(kZero1, kZero1, ens, 2.0).mean == doctest::Approx(2.0));
  CHECK(build_ovd(kZero1, kZero1, ens, 2.0).std == doctest::Approx(kSigmaFloor));

  auto unit = testing::constant_ensemble(1, 1, Eigen::VectorXd::Constant(2, 1.0),
                                         Eigen::VectorXd::Constant(2, -1.0));
  CHECK(build_ovd(kZero1, kZero1, unit, 3.2).mean == doctest::Approx(3.2));
}

TEST_CASE("current gaussian is the pessimistic mirror, with an off switch") {
  auto ens = testing::constant_ensemble(1, 1, Eigen::VectorXd::Constant(3, 1.5),
                                        Eigen::VectorXd::Constant(3, 0.5));
  CHECK(build_current_gaussian(kZero1, kZero1, ens, 0.0).mean == doctest::Approx(1.0));
  CHECK(build_current_gaussian(kZero1, kZero1, ens, 2.0).mean == doctest::Approx(0.0));
  CHECK(build_current_gaussian(kZero1, kZero1, ens, 2.0, /*pessimistic_mean=*/false).mean ==
        doctest::Approx(1.0));
  CHECK(build_ovd(kZero1, kZero1, ens, 2.0).mean >=
        build_current_gaussian(kZero1, kZero1, ens, 2.0).mean);
}

TEST_CASE("current quantile distribution takes per-quantile minima") {
  Eigen::VectorXd v(2);
  v << 0.4, 1.2;
  auto same = testing::constant_ensemble(1, 1, v, v);
  CHECK((build_current_quantile(kZero1, kZero1, same).values - v).norm() == doctest::Approx(0.0));

  Eigen::VectorXd v1(2), v2(2);
  v1 << 1.0, 4.0;
  v2 << 2.0, 3.0;
  auto ens = testing::constant_ensemble(1, 1, v1, v2);
  const QuantileDistribution z = build_current_quantile(kZero1, kZero1, ens);
  CHECK(z.values[0] == doctest::Approx(1.0));
  CHECK(z.values[1] == doctest::Approx(3.0));

  auto dominated = testing::constant_ensemble(1, 1, v1, Eigen::VectorXd(v1.array() - 2.0));
  CHECK((build_current_quantile(kZero1, kZero1, dominated).values - (v1.array() - 2.0).matrix())
            .norm() == doctest::Approx(0.0));
}

TEST_CASE("gaussian cdf values") {
  const GaussianSpec g{2.0, 1.5};
  CHECK(cdf(g, 2.0) == doctest::Approx(0.5));
  CHECK(cdf(g, 2.0 + 1.96 * 1.5) == doctest::Approx(0.975).epsilon(1e-3));
  CHECK(cdf(g, -1e9) == doctest::Approx(0.0));
  CHECK(cdf(g, 1e9) == doctest::Approx(1.0));
}

TEST_CASE("quantile cdf counts values at or below x") {
  Eigen::VectorXd v(4);
  v << 1.0, 2.0, 3.0, 4.0;
  const QuantileDistribution q = make_quantile_distribution(v);
  CHECK(cdf(q, 2.5) == doctest::Approx(0.5));
  CHECK(cdf(q, 0.0) == doctest::Approx(0.0));
  CHECK(cdf(q, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("cdf is non-decreasing for both distribution kinds") {
  RngStream rng(88);
  for (int trial = 0; trial < 2000; ++trial) {
    const GaussianSpec g{rng.normal() * 3.0, 0.1 + rng.uniform() * 2.0};
    const double x1 = rng.normal() * 4.0;
    const double x2 = x1 + rng.uniform() * 3.0;
    CHECK(cdf(g, x1) <= cdf(g, x2));

    Eigen::VectorXd v(5);
    for (int i = 0; i < 5; ++i) v[i] = rng.normal() * 2.0;
    const QuantileDistribution q = make_quantile_distribution(v);
    CHECK(cdf(q, x1) <= cdf(q, x2));
  }
}

TEST_CASE("optimism multiplier is exactly one at phi = C") {
  CHECK(optimism_multiplier(0.5, 0.5) == 1.0);
  CHECK(optimism_multiplier(0.25, 0.5) < 1.0);
  CHECK(optimism_multiplier(1.0, 0.5) > 1.0);
  // floor keeps the log finite
  CHECK(std::isfinite(optimism_multiplier(0.0, 0.5)));
}

TEST_CASE("exploration ability vanishes when the cdf sits at C") {
  // identical constant critics: z values all 0, sampled z around 0, C = 1
  auto ens = testing::constant_ensemble(1, 1, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4));
  ExplorationConfig config;
  config.c_norm = 1.0;
  config.z_mode = ZMode::kQuantile;
  RngStream rng(5);
  CHECK(exploration_ability_at(kZero1, kZero1, ens, config, rng, 256) == doctest::Approx(0.0));
  CHECK(exploration_ability_at(kZero1, kZero1, ens, config, rng, 0) == doctest::Approx(0.0));
}

TEST_CASE("higher epistemic uncertainty raises the exploration ability") {
  // critic disagreement grows with the action; everything else is flat
  const int state_dim = 1, action_dim = 1;
  Eigen::MatrixXd w1(2, 2), w2(2, 2);
  w1 << 0.0, 1.0, 0.0, 1.0;   // q1_i = m_i + a
  w2 << 0.0, -1.0, 0.0, -1.0;  // q2_i = m_i - a
  Eigen::VectorXd m(2);
  m << 0.0, 1.0;
  auto ens = testing::linear_ensemble(state_dim, action_dim, w1, m, w2, m);

  ExplorationConfig config;  // beta 3.2, C 0.5, gaussian
  Eigen::VectorXd a1(1), a2(1);
  a1 << 0.8;
  a2 << 0.2;

  RngStream rng(17);
  const double i1 = exploration_ability_at(kZero1, a1, ens, config, rng, 8192);
  const double i2 = exploration_ability_at(kZero1, a2, ens, config, rng, 8192);
  CHECK(i1 > i2);

  // quadrature oracle over the same gaussians
  const auto oracle = [&](double action) {
    const double sig_epi = std::abs(action);
    const GaussianSpec ovd{0.5 + config.beta * sig_epi, 0.5};
    const GaussianSpec z_pi{0.5 - config.beta * sig_epi, 0.5};
    return ability_quadrature(ovd, z_pi, config.c_norm);
  };
  CHECK(oracle(0.8) > oracle(0.2));
  CHECK(i1 == doctest::Approx(oracle(0.8)).epsilon(0.05));
  CHECK(i2 == doctest::Approx(oracle(0.2)).epsilon(0.05));
}

TEST_CASE("lower aleatoric uncertainty raises the ability above the mean") {
  // per-quantile spread grows with the action; disagreement is constant
  Eigen::MatrixXd w1(2, 2), w2(2, 2);
  w1 << 0.0, -1.0, 0.0, 1.0;  // m_i(a) = -a, +a
  w2 = w1;
  Eigen::VectorXd b1(2), b2(2);
  b1 << 0.1, 0.1;   // critic 1 shifted up
  b2 << -0.1, -0.1;  // critic 2 shifted down: sigma_epi = 0.1
  auto ens = testing::linear_ensemble(1, 1, w1, b1, w2, b2);

  ExplorationConfig config;
  Eigen::VectorXd low(1), high(1);
  low << 0.2;   // sigma_alea = 0.2
  high << 0.8;  // sigma_alea = 0.8

  RngStream rng(3);
  const double i_low = exploration_ability_at(kZero1, low, ens, config, rng, 0);
  const double i_high = exploration_ability_at(kZero1, high, ens, config, rng, 0);
  CHECK(i_low > i_high);

  // deterministic evaluation matches the closed form at z = OVD mean
  const auto closed = [&](double sig_alea) {
    const double phi = testing::normal_cdf(2.0 * config.beta * 0.1 / sig_alea);
    return phi * std::log(phi / config.c_norm) / config.c_norm;
  };
  CHECK(i_low == doctest::Approx(closed(0.2)).epsilon(1e-9));
  CHECK(i_high == doctest::Approx(closed(0.8)).epsilon(1e-9));
}

TEST_CASE("ovd value gradient matches finite differences") {
  RngStream rng(2718);
  CriticEnsemble ens = CriticEnsemble::make(2, 2, 8, {16, 16}, rng);
  // random nets start with zero biases; jitter so outputs spread
  for (int k = 0; k < 2; ++k)
    for (auto& l : ens.online[k].layers())
      l.bias = Eigen::VectorXd::NullaryExpr(l.bias.size(), [&] { return 0.5 * rng.normal(); });

  const Eigen::VectorXd s = Eigen::Vector2d(0.3, -0.4);
  const Eigen::VectorXd a_pre = Eigen::Vector2d(0.5, -0.2);
  const double beta = 3.2;
  const double eps_bar = 0.7;

  const OvdGradient g = ovd_value_gradient(s, a_pre, ens, beta, eps_bar);
  REQUIRE(g.uncertainty.aleatoric_std > 1e-4);  // away from the floor
  REQUIRE(g.uncertainty.epistemic_std > 1e-4);

  const auto value_at = [&](const Eigen::VectorXd& pre) {
    const Eigen::VectorXd action = squash(pre);
    const Eigen::VectorXd q1 = ens.online_quantiles(0, s, action);
    const Eigen::VectorXd q2 = ens.online_quantiles(1, s, action);
    return ensemble_mean(q1, q2) + beta * epistemic_std(q1, q2) + eps_bar * aleatoric_std(q1, q2);
  };
  for (int d = 0; d < 2; ++d) {
    const double numeric = testing::central_difference(
        [&](double x) {
          Eigen::VectorXd p = a_pre;
          p[d] = x;
          return value_at(p);
        },
        a_pre[d]);
    CHECK(testing::relative_error(g.grad_pre_squash[d], numeric) < 1e-4);
  }
}

TEST_CASE("behavior policy with alpha 0 is bit-identical to the head") {
  RngStream init(55);
  CriticEnsemble ens = CriticEnsemble::make(2, 2, 4, {8}, init);
  ExplorationConfig config;
  config.alpha = 0.0;
  RngStream rng(9);
  const Eigen::VectorXd mu = Eigen::Vector2d(0.123456789, -3.5);
  const Eigen::VectorXd sigma = Eigen::Vector2d(0.7, 1.3);
  const BehaviorPolicyResult r =
      behavior_policy(Eigen::Vector2d(0.1, 0.2), mu, sigma, ens, config, rng);
  CHECK(r.mean == mu);
  CHECK(r.std == sigma);
  CHECK(r.shift_norm == 0.0);
}

TEST_CASE("behavior policy arithmetic: phi = C gives m = 1 and shift alpha*m*grad") {
  // identical critics linear in the action: mu = 2a + const, sigma_epi = 0,
  // so phi lands exactly at 0.5 = C and m = 1
  Eigen::MatrixXd w(2, 2);
  w << 0.0, 2.0, 0.0, 2.0;
  Eigen::VectorXd b(2);
  b << -1.0, 1.0;  // aleatoric = 1, independent of the action
  auto ens = testing::linear_ensemble(1, 1, w, b, w, b);

  ExplorationConfig config;  // alpha 0.05, C 0.5
  config.k_samples = 1;
  RngStream rng(31);
  const Eigen::VectorXd mu_phi = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd sigma_phi = Eigen::VectorXd::Constant(1, 0.4);
  const BehaviorPolicyResult r = behavior_policy(kZero1, mu_phi, sigma_phi, ens, config, rng);
  CHECK(r.m == doctest::Approx(1.0));
  // tanh'(0) = 1, d mu / d a = 2: shift = 0.05 * 1 * 2 = 0.1
  CHECK(r.mean[0] == doctest::Approx(0.1));
  CHECK(r.std == sigma_phi);
  CHECK_FALSE(r.negative_m);
}

TEST_CASE("flat value landscape leaves the behavior mean at the head") {
  auto ens = testing::constant_ensemble(1, 1, Eigen::VectorXd::Constant(4, 1.0),
                                        Eigen::VectorXd::Constant(4, 1.0));
  ExplorationConfig config;
  RngStream rng(12);
  const Eigen::VectorXd mu_phi = Eigen::VectorXd::Constant(1, 0.3);
  const BehaviorPolicyResult r =
      behavior_policy(kZero1, mu_phi, Eigen::VectorXd::Ones(1), ens, config, rng);
  CHECK(r.mean[0] == doctest::Approx(0.3));
}

TEST_CASE("covariance always equals the head std") {
  RngStream init(77);
  CriticEnsemble ens = CriticEnsemble::make(2, 2, 6, {12}, init);
  ExplorationConfig config;
  RngStream rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd s = Eigen::Vector2d(rng.normal(), rng.normal());
    const Eigen::VectorXd mu = Eigen::Vector2d(rng.normal(), rng.normal());
    const Eigen::VectorXd sigma = Eigen::Vector2d(0.1 + rng.uniform(), 0.1 + rng.uniform());
    const BehaviorPolicyResult r = behavior_policy(s, mu, sigma, ens, config, rng);
    CHECK(r.std == sigma);
  }
}

TEST_CASE("phi below C/e flips the shift direction and is flagged") {
  // quantile mode: one low quantile out of eight puts phi = 1/8 < C/e
  Eigen::MatrixXd w(8, 2);
  w.setZero();
  w.col(1).setConstant(1.0);  // slope so the gradient is nonzero
  Eigen::VectorXd b(8);
  b << 0.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0;
  auto ens = testing::linear_ensemble(1, 1, w, b, w, b);

  ExplorationConfig config;
  config.z_mode = ZMode::kQuantile;
  config.k_samples = 0;
  RngStream rng(44);
  const BehaviorPolicyResult r =
      behavior_policy(kZero1, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), ens, config, rng);
  CHECK(r.negative_m);
  CHECK(r.m < 0.0);
  CHECK(r.mean[0] < 0.0);  // gradient of the mean is +1, reversed by m < 0
}

TEST_CASE("non-finite gradients fall back to the head mean") {
  RngStream init(3);
  CriticEnsemble ens = CriticEnsemble::make(1, 1, 4, {4}, init);
  ens.online[0].layers()[0].weight.setConstant(std::numeric_limits<double>::infinity());
  ExplorationConfig config;
  RngStream rng(8);
  const Eigen::VectorXd mu_phi = Eigen::VectorXd::Constant(1, -0.25);
  const BehaviorPolicyResult r =
      behavior_policy(kZero1, mu_phi, Eigen::VectorXd::Ones(1), ens, config, rng);
  CHECK(r.gradient_fallback);
  CHECK(r.mean == mu_phi);
}

TEST_CASE("exploration ability over the policy averages per-action terms") {
  RngStream init(91);
  CriticEnsemble ens = CriticEnsemble::make(2, 2, 4, {8}, init);
  RngStream policy_rng(6);
  PolicyHead policy(2, 2, {8}, policy_rng);
  ExplorationConfig config;
  RngStream rng(21);
  const double value =
      exploration_ability(Eigen::Vector2d(0.0, 0.0), policy, ens, config, rng, 16, 32);
  CHECK(std::isfinite(value));
}
