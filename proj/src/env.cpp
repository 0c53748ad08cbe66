#include "ovd/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ovd {

int quadrant_of(const Eigen::Vector2d& position, const Box2& bounds) {
  const Eigen::Vector2d c = bounds.center();
  const double dx = position.x() - c.x();
  const double dy = position.y() - c.y();
  if (dx > 0.0 && dy > 0.0) return 1;
  if (dx < 0.0 && dy > 0.0) return 2;
  if (dx < 0.0 && dy < 0.0) return 3;
  if (dx > 0.0 && dy < 0.0) return 4;
  // on an axis: lower-numbered adjacent quadrant
  if (dx == 0.0) {
    if (dy > 0.0) return 1;  // between 1 and 2
    if (dy < 0.0) return 3;  // between 3 and 4
    return 1;                // center
  }
  return dx > 0.0 ? 1 : 2;  // dy == 0: between 1/4 or 2/3
}

void GridChaosConfig::validate() const {
  for (double s : quadrant_noise)
    if (s < 0.0 || !std::isfinite(s))
      throw std::invalid_argument("gridchaos.quadrant_noise: entries must be non-negative");
  if (!(bounds.lo.x() < bounds.hi.x() && bounds.lo.y() < bounds.hi.y()))
    throw std::invalid_argument("gridchaos.bounds: lo must be strictly below hi");
  if (!bounds.contains(start)) throw std::invalid_argument("gridchaos.start: outside bounds");
  if (!bounds.contains(goal)) throw std::invalid_argument("gridchaos.goal: outside bounds");
  if (goal_radius <= 0.0) throw std::invalid_argument("gridchaos.goal_radius: must be positive");
  if (max_steps < 1) throw std::invalid_argument("gridchaos.max_steps: must be at least 1");
  if (max_step_distance <= 0.0)
    throw std::invalid_argument("gridchaos.max_step_distance: must be positive");
}

GridChaosEnv::GridChaosEnv(GridChaosConfig config, std::uint64_t noise_seed)
    : config_(std::move(config)), rng_(noise_seed), position_(config_.start) {
  config_.validate();
}

Eigen::VectorXd GridChaosEnv::reset() {
  position_ = config_.start;
  step_count_ = 0;
  return position_;
}

void GridChaosEnv::teleport(const Eigen::Vector2d& position) {
  if (!config_.bounds.contains(position))
    throw std::invalid_argument("gridchaos: teleport target outside bounds");
  position_ = position;
}

StepResult GridChaosEnv::step(const Eigen::VectorXd& action) {
  if (action.size() != 2) throw std::invalid_argument("gridchaos: action must be 2-dimensional");
  double a0 = action[0];
  double a1 = action[1];
  if (!std::isfinite(a0) || !std::isfinite(a1)) {
    ++nonfinite_actions_;
    a0 = 0.0;
    a1 = -1.0;  // maps to zero distance
  }
  const double angle = 3.14159265358979323846 * std::clamp(a0, -1.0, 1.0);
  const double distance = 0.5 * (std::clamp(a1, -1.0, 1.0) + 1.0) * config_.max_step_distance;
  return step_polar(angle, distance);
}

StepResult GridChaosEnv::step_polar(double angle, double distance) {
  distance = std::clamp(distance, 0.0, config_.max_step_distance);
  const int quadrant = quadrant_of(position_, config_.bounds);
  const double sigma = config_.quadrant_noise[static_cast<std::size_t>(quadrant - 1)];
  // two draws every step so the stream advances uniformly regardless of sigma
  last_noise_ = Eigen::Vector2d(sigma * rng_.normal(), sigma * rng_.normal());

  Eigen::Vector2d raw = position_ +
                        distance * Eigen::Vector2d(std::cos(angle), std::sin(angle)) +
                        last_noise_;
  Eigen::Vector2d next(std::clamp(raw.x(), config_.bounds.lo.x(), config_.bounds.hi.x()),
                       std::clamp(raw.y(), config_.bounds.lo.y(), config_.bounds.hi.y()));
  ++step_count_;
  position_ = next;

  const bool reached = (next - config_.goal).norm() <= config_.goal_radius;
  StepResult result;
  result.next_state = next;
  result.reward = reached ? 100.0 : 0.0;
  result.done = reached || step_count_ >= config_.max_steps;
  result.timeout = result.done && !reached;
  return result;
}

GaussianNoiseWrapper::GaussianNoiseWrapper(std::unique_ptr<Env> inner, double noise_std,
                                           std::uint64_t noise_seed)
    : inner_(std::move(inner)), noise_std_(noise_std), rng_(noise_seed) {
  if (!inner_) throw std::invalid_argument("noise wrapper: inner env required");
  if (noise_std_ < 0.0) throw std::invalid_argument("noise wrapper: noise_std must be >= 0");
}

StepResult GaussianNoiseWrapper::step(const Eigen::VectorXd& action) {
  StepResult result = inner_->step(action);
  for (Eigen::Index i = 0; i < result.next_state.size(); ++i)
    result.next_state[i] += noise_std_ * rng_.normal();
  return result;
}

BanditEnv::BanditEnv(std::function<double(RngStream&)> reward_fn, std::uint64_t seed)
    : reward_fn_(std::move(reward_fn)), rng_(seed) {
  if (!reward_fn_) throw std::invalid_argument("bandit: reward function required");
}

StepResult BanditEnv::step(const Eigen::VectorXd&) {
  return {Eigen::VectorXd::Zero(1), reward_fn_(rng_), true};
}

}  // namespace ovd
