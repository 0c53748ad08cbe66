#pragma once

#include <functional>

#include "ovd/adam.hpp"
#include "ovd/critic.hpp"
#include "ovd/env.hpp"
#include "ovd/explorer.hpp"
#include "ovd/policy.hpp"
#include "ovd/replay.hpp"

namespace ovd {

struct AgentConfig {
  int state_dim = 2;
  int action_dim = 2;
  int n_quantiles = 20;
  std::vector<int> hidden{64, 64};
  double gamma = 0.99;
  double target_smoothing = 5e-3;
  double learning_rate = 3e-4;
  int batch_size = 256;
  std::size_t buffer_capacity = 100000;
  double entropy_coeff = 0.2;
  int warmup_steps = 1000;  // uniform random actions before learned exploration
  ExplorationConfig explore;
};

enum class ActionMode { kExplore, kExploit };

struct ActResult {
  Eigen::VectorXd action;      // squashed, within bounds
  Eigen::VectorXd pre_squash;
  BehaviorPolicyResult behavior;
  bool explored = false;  // behavior-policy gradient step ran
};

struct Batch {
  Eigen::MatrixXd states, actions, next_states;  // columns = samples
  Eigen::VectorXd rewards;
  Eigen::VectorXd done_mask;  // 1.0 at terminal transitions
};

Batch assemble_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices);

/// Distributional soft actor-critic learner. One training thread owns the
/// parameters; read-only snapshots may be shared for evaluation.
class DsacAgent {
 public:
  DsacAgent(AgentConfig config, std::uint64_t seed);

  ActResult act(const Eigen::VectorXd& state, ActionMode mode);
  ActResult warmup_act();

  void observe(Transition t);
  bool can_update(long steps_taken) const;
  void update();  // one critic + one actor step, then target soft updates

  void critic_update(const Batch& batch);
  void actor_update(const Batch& batch);

  const AgentConfig& config() const { return config_; }
  const PolicyHead& policy() const { return policy_; }
  PolicyHead& policy() { return policy_; }
  const Mlp& policy_target() const { return policy_target_; }
  CriticEnsemble& critics() { return critics_; }
  const CriticEnsemble& critics() const { return critics_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long update_count() const { return update_count_; }
  long gradient_fallbacks() const { return gradient_fallbacks_; }
  long negative_m_count() const { return negative_m_count_; }

 private:
  void sync_targets();

  AgentConfig config_;
  PolicyHead policy_;
  Mlp policy_target_;
  CriticEnsemble critics_;
  AdamState adam_policy_;
  std::array<AdamState, 2> adam_critic_;
  ReplayBuffer buffer_;
  RngStream act_rng_;
  RngStream update_rng_;
  RngStream replay_rng_;
  long update_count_ = 0;
  long gradient_fallbacks_ = 0;
  long negative_m_count_ = 0;
};

struct TrainLoopConfig {
  int epochs = 1250;
  int steps_per_epoch = 100;
  int eval_episodes = 10;
};

/// One metrics row per epoch.
struct EpochStats {
  int epoch = 0;
  double eval_return_mean = 0.0;
  double eval_return_std = 0.0;
  double epistemic_mean = 0.0;
  double aleatoric_mean = 0.0;
  double m_mean = 0.0;
  double shift_norm_mean = 0.0;
};

using EpochSink = std::function<void(const EpochStats&)>;
using StepSink = std::function<void(const Eigen::VectorXd& next_state)>;

/// Full training loop: interact through the behavior policy, store, update
/// once per environment step after warmup, evaluate deterministically each
/// epoch. Evaluation episodes run on `eval_env`.
void train_run(DsacAgent& agent, Env& train_env, Env& eval_env, const TrainLoopConfig& loop,
               const EpochSink& on_epoch, const StepSink& on_step = nullptr);

}  // namespace ovd
