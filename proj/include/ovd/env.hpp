#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <memory>

#include "ovd/rng.hpp"

namespace ovd {

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool done = false;     // episode over (terminal state or step cap)
  bool timeout = false;  // done was caused by the step cap, not a terminal
};

class Env {
 public:
  virtual ~Env() = default;
  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual Eigen::VectorXd reset() = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
};

struct Box2 {
  Eigen::Vector2d lo{-1.0, -1.0};
  Eigen::Vector2d hi{1.0, 1.0};
  Eigen::Vector2d center() const { return 0.5 * (lo + hi); }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

/// Quadrants are numbered counterclockwise from (+, +) about the box center;
/// points on the axes go to the lower-numbered adjacent quadrant.
int quadrant_of(const Eigen::Vector2d& position, const Box2& bounds);

struct GridChaosConfig {
  std::array<double, 4> quadrant_noise{0.1, 0.5, 0.5, 0.1};  // std per quadrant, map units
  Eigen::Vector2d start{-0.9, -0.9};
  Eigen::Vector2d goal{0.9, 0.9};
  double goal_radius = 0.1;
  double max_step_distance = 0.1;
  int max_steps = 100;
  Box2 bounds;

  void validate() const;  // throws std::invalid_argument naming the field
};

/// 2D navigation with quadrant-dependent Gaussian transition noise and a
/// sparse +100 goal reward. The agent-facing action box is [-1, 1]^2:
/// component 0 maps affinely to the movement angle in [-pi, pi], component 1
/// to the distance in [0, max_step_distance].
class GridChaosEnv : public Env {
 public:
  GridChaosEnv(GridChaosConfig config, std::uint64_t noise_seed);

  int state_dim() const override { return 2; }
  int action_dim() const override { return 2; }
  Eigen::VectorXd reset() override;
  StepResult step(const Eigen::VectorXd& action) override;

  /// Direct (angle, distance) form; angle in radians, distance clamped to
  /// [0, max_step_distance].
  StepResult step_polar(double angle, double distance);

  const GridChaosConfig& config() const { return config_; }
  const Eigen::Vector2d& position() const { return position_; }
  int step_count() const { return step_count_; }
  void teleport(const Eigen::Vector2d& position);  // diagnostic/test seam
  const Eigen::Vector2d& last_noise() const { return last_noise_; }
  long nonfinite_action_count() const { return nonfinite_actions_; }

 private:
  GridChaosConfig config_;
  RngStream rng_;
  Eigen::Vector2d position_;
  Eigen::Vector2d last_noise_{0.0, 0.0};
  int step_count_ = 0;
  long nonfinite_actions_ = 0;
};

/// Adds N(0, noise_std^2) to every next-state component returned by the
/// wrapped environment.
class GaussianNoiseWrapper : public Env {
 public:
  GaussianNoiseWrapper(std::unique_ptr<Env> inner, double noise_std, std::uint64_t noise_seed);

  int state_dim() const override { return inner_->state_dim(); }
  int action_dim() const override { return inner_->action_dim(); }
  Eigen::VectorXd reset() override { return inner_->reset(); }
  StepResult step(const Eigen::VectorXd& action) override;

 private:
  std::unique_ptr<Env> inner_;
  double noise_std_;
  RngStream rng_;
};

/// One-step environment whose reward comes from a caller-supplied sampler;
/// test oracle for discount-free value learning.
class BanditEnv : public Env {
 public:
  BanditEnv(std::function<double(RngStream&)> reward_fn, std::uint64_t seed);

  int state_dim() const override { return 1; }
  int action_dim() const override { return 1; }
  Eigen::VectorXd reset() override { return Eigen::VectorXd::Zero(1); }
  StepResult step(const Eigen::VectorXd& action) override;

 private:
  std::function<double(RngStream&)> reward_fn_;
  RngStream rng_;
};

}  // namespace ovd
