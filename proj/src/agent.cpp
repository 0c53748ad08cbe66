#include "ovd/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace ovd {

namespace {

Eigen::MatrixXd draw_normals(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  return m;
}

}  // namespace

Batch assemble_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("batch: empty index list");
  const Transition& first = buffer[indices.front()];
  const Eigen::Index s_dim = first.state.size();
  const Eigen::Index a_dim = first.action.size();
  const Eigen::Index b = static_cast<Eigen::Index>(indices.size());

  Batch batch;
  batch.states.resize(s_dim, b);
  batch.actions.resize(a_dim, b);
  batch.next_states.resize(s_dim, b);
  batch.rewards.resize(b);
  batch.done_mask.resize(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Transition& t = buffer[indices[static_cast<std::size_t>(i)]];
    batch.states.col(i) = t.state;
    batch.actions.col(i) = t.action;
    batch.next_states.col(i) = t.next_state;
    batch.rewards[i] = t.reward;
    batch.done_mask[i] = t.done ? 1.0 : 0.0;
  }
  return batch;
}

DsacAgent::DsacAgent(AgentConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      buffer_(config_.buffer_capacity),
      act_rng_(make_stream(seed, StreamId::kActionSampling)),
      update_rng_(make_stream(seed, StreamId::kUpdateSampling)),
      replay_rng_(make_stream(seed, StreamId::kReplaySampling)) {
  RngStream init_rng = make_stream(seed, StreamId::kNetworkInit);
  policy_ = PolicyHead(config_.state_dim, config_.action_dim, config_.hidden, init_rng);
  policy_target_ = policy_.net();
  critics_ = CriticEnsemble::make(config_.state_dim, config_.action_dim, config_.n_quantiles,
                                  config_.hidden, init_rng);
  const AdamConfig adam{config_.learning_rate};
  adam_policy_ = AdamState(policy_.net(), adam);
  adam_critic_[0] = AdamState(critics_.online[0], adam);
  adam_critic_[1] = AdamState(critics_.online[1], adam);
}

ActResult DsacAgent::act(const Eigen::VectorXd& state, ActionMode mode) {
  const PolicyEval eval = policy_.evaluate(state);
  ActResult result;
  if (mode == ActionMode::kExploit) {
    result.pre_squash = eval.mu;
    result.action = squash(eval.mu);
    return result;
  }
  result.behavior =
      behavior_policy(state, eval.mu, eval.sigma, critics_, config_.explore, act_rng_);
  if (result.behavior.gradient_fallback) ++gradient_fallbacks_;
  if (result.behavior.negative_m) ++negative_m_count_;
  result.explored = config_.explore.alpha != 0.0;

  Eigen::VectorXd pre(result.behavior.mean.size());
  for (Eigen::Index d = 0; d < pre.size(); ++d)
    pre[d] = result.behavior.mean[d] + result.behavior.std[d] * act_rng_.normal();
  result.pre_squash = pre;
  result.action = squash(pre);
  return result;
}

ActResult DsacAgent::warmup_act() {
  ActResult result;
  Eigen::VectorXd action(config_.action_dim);
  for (int d = 0; d < config_.action_dim; ++d) action[d] = act_rng_.uniform(-1.0, 1.0);
  result.action = action;
  result.pre_squash = unsquash(action);
  return result;
}

void DsacAgent::observe(Transition t) { buffer_.push(std::move(t)); }

bool DsacAgent::can_update(long steps_taken) const {
  return steps_taken >= config_.warmup_steps &&
         buffer_.size() >= static_cast<std::size_t>(config_.batch_size);
}

void DsacAgent::update() {
  const Batch batch =
      assemble_batch(buffer_, buffer_.sample_indices(
                                  static_cast<std::size_t>(config_.batch_size), replay_rng_));
  critic_update(batch);
  actor_update(batch);
  sync_targets();
  ++update_count_;
}

void DsacAgent::critic_update(const Batch& batch) {
  const Eigen::Index b = batch.states.cols();
  const Eigen::Index a_dim = config_.action_dim;
  const Eigen::Index n = config_.n_quantiles;

  // fresh next actions from the current policy
  const PolicyBatchEval next_eval = policy_.evaluate_batch(batch.next_states);
  const Eigen::MatrixXd eps = draw_normals(a_dim, b, update_rng_);
  const Eigen::MatrixXd pre = next_eval.mu + next_eval.sigma.cwiseProduct(eps);
  const Eigen::MatrixXd next_actions = matrix_tanh(pre);
  const Eigen::RowVectorXd log_pi = squashed_log_prob_batch(pre, next_eval.mu, next_eval.sigma);

  const Eigen::MatrixXd joined_next = join_state_action(batch.next_states, next_actions);
  const Eigen::MatrixXd z1 = critics_.target[0].forward(joined_next);
  const Eigen::MatrixXd z2 = critics_.target[1].forward(joined_next);
  const Eigen::MatrixXd z_min = z1.cwiseMin(z2);

  Eigen::MatrixXd targets(n, b);
  for (Eigen::Index col = 0; col < b; ++col) {
    const double bootstrap = config_.gamma * (1.0 - batch.done_mask[col]);
    targets.col(col) =
        (batch.rewards[col] +
         bootstrap * (z_min.col(col).array() - config_.entropy_coeff * log_pi[col]))
            .matrix();
  }
  if (!targets.allFinite())
    throw std::runtime_error("critic_update: non-finite TD targets");

  const Eigen::MatrixXd joined = join_state_action(batch.states, batch.actions);
  for (int k = 0; k < 2; ++k) {
    GradientTape tape = forward_tape(critics_.online[k], joined);
    const Eigen::MatrixXd cot = pinball_gradient_batch(tape.output(), critics_.fractions, targets);
    const MlpGradients grads = backward(critics_.online[k], tape, cot);
    adam_critic_[static_cast<std::size_t>(k)].step(critics_.online[k], grads);
  }
}

void DsacAgent::actor_update(const Batch& batch) {
  const Eigen::Index b = batch.states.cols();
  const Eigen::Index a_dim = config_.action_dim;
  const Eigen::Index n = config_.n_quantiles;
  const double inv_b = 1.0 / static_cast<double>(b);

  PolicyBatchEval eval = policy_.evaluate_batch(batch.states);
  const Eigen::MatrixXd eps = draw_normals(a_dim, b, update_rng_);
  const Eigen::MatrixXd pre = eval.mu + eval.sigma.cwiseProduct(eps);
  const Eigen::MatrixXd actions = matrix_tanh(pre);

  const Eigen::MatrixXd joined = join_state_action(batch.states, actions);
  GradientTape tape1 = forward_tape(critics_.online[0], joined);
  GradientTape tape2 = forward_tape(critics_.online[1], joined);
  const Eigen::RowVectorXd mean1 = tape1.output().colwise().mean();
  const Eigen::RowVectorXd mean2 = tape2.output().colwise().mean();

  // J = (1/B) sum [entropy_coeff * log pi - Q]; Q is the min-of-means critic,
  // so each sample routes -1/(N B) through its argmin critic only.
  Eigen::MatrixXd cot1 = Eigen::MatrixXd::Zero(n, b);
  Eigen::MatrixXd cot2 = Eigen::MatrixXd::Zero(n, b);
  const double q_cot = -inv_b / static_cast<double>(n);
  for (Eigen::Index col = 0; col < b; ++col) {
    if (mean1[col] <= mean2[col])
      cot1.col(col).setConstant(q_cot);
    else
      cot2.col(col).setConstant(q_cot);
  }
  Eigen::MatrixXd din1, din2;
  backward(critics_.online[0], tape1, cot1, &din1, /*skip_parameters=*/true);
  backward(critics_.online[1], tape2, cot2, &din2, /*skip_parameters=*/true);
  const Eigen::MatrixXd d_action = din1.bottomRows(a_dim) + din2.bottomRows(a_dim);

  // through the squash, plus the tanh term of the log-density correction
  const Eigen::ArrayXXd tanh_u = actions.array();
  const Eigen::ArrayXXd d_pre =
      d_action.array() * (1.0 - tanh_u.square()) + (config_.entropy_coeff * inv_b) * 2.0 * tanh_u;

  const Eigen::ArrayXXd d_mu = d_pre;
  // log-std path: through u = mu + sigma eps and the direct -log sigma term,
  // gated where the raw head is outside the clamp range
  const Eigen::ArrayXXd gate =
      (eval.log_std_raw.array() >= kLogStdMin && eval.log_std_raw.array() <= kLogStdMax)
          .cast<double>();
  const Eigen::ArrayXXd d_log_std =
      (d_pre * (eval.sigma.array() * eps.array()) - config_.entropy_coeff * inv_b) * gate;

  Eigen::MatrixXd cot(2 * a_dim, b);
  cot.topRows(a_dim) = d_mu.matrix();
  cot.bottomRows(a_dim) = d_log_std.matrix();
  const MlpGradients grads = backward(policy_.net(), eval.tape, cot);
  adam_policy_.step(policy_.net(), grads);
}

void DsacAgent::sync_targets() {
  soft_update(critics_.target[0], critics_.online[0], config_.target_smoothing);
  soft_update(critics_.target[1], critics_.online[1], config_.target_smoothing);
  soft_update(policy_target_, policy_.net(), config_.target_smoothing);
}

void train_run(DsacAgent& agent, Env& train_env, Env& eval_env, const TrainLoopConfig& loop,
               const EpochSink& on_epoch, const StepSink& on_step) {
  if (loop.epochs < 0 || loop.steps_per_epoch < 1 || loop.eval_episodes < 1)
    throw std::invalid_argument("train_run: invalid loop configuration");

  long steps_taken = 0;
  Eigen::VectorXd state = train_env.reset();

  for (int epoch = 0; epoch < loop.epochs; ++epoch) {
    double sum_epi = 0.0, sum_alea = 0.0, sum_m = 0.0, sum_shift = 0.0;
    long explored_steps = 0;

    for (int t = 0; t < loop.steps_per_epoch; ++t) {
      const bool warm = steps_taken < agent.config().warmup_steps;
      const ActResult act = warm ? agent.warmup_act() : agent.act(state, ActionMode::kExplore);
      const StepResult sr = train_env.step(act.action);

      Transition tr;
      tr.state = state;
      tr.action = act.action;
      tr.pre_squash = act.pre_squash;
      tr.reward = sr.reward;
      tr.next_state = sr.next_state;
      // step-cap timeouts are not terminal states: keep the bootstrap so the
      // critic does not learn a value cliff tied to episode age
      tr.done = sr.done && !sr.timeout;
      agent.observe(std::move(tr));
      if (on_step) on_step(sr.next_state);

      const UncertaintyEstimate ue = uncertainty_at(state, act.action, agent.critics());
      sum_epi += ue.epistemic_std;
      sum_alea += ue.aleatoric_std;
      if (act.explored) {
        sum_m += act.behavior.m;
        sum_shift += act.behavior.shift_norm;
        ++explored_steps;
      }

      state = sr.done ? train_env.reset() : sr.next_state;
      ++steps_taken;
      if (agent.can_update(steps_taken)) agent.update();
    }

    // deterministic evaluation episodes
    double ret_sum = 0.0, ret_sq_sum = 0.0;
    for (int ep = 0; ep < loop.eval_episodes; ++ep) {
      Eigen::VectorXd s = eval_env.reset();
      double ep_return = 0.0;
      bool done = false;
      while (!done) {
        const ActResult a = agent.act(s, ActionMode::kExploit);
        const StepResult sr = eval_env.step(a.action);
        ep_return += sr.reward;
        done = sr.done;
        s = sr.next_state;
      }
      ret_sum += ep_return;
      ret_sq_sum += ep_return * ep_return;
    }
    const double ne = static_cast<double>(loop.eval_episodes);
    const double mean = ret_sum / ne;
    const double var = loop.eval_episodes > 1
                           ? std::max(0.0, (ret_sq_sum - ne * mean * mean) / (ne - 1.0))
                           : 0.0;

    EpochStats stats;
    stats.epoch = epoch;
    stats.eval_return_mean = mean;
    stats.eval_return_std = std::sqrt(var);
    const double ns = static_cast<double>(loop.steps_per_epoch);
    stats.epistemic_mean = sum_epi / ns;
    stats.aleatoric_mean = sum_alea / ns;
    stats.m_mean = explored_steps > 0 ? sum_m / static_cast<double>(explored_steps) : 0.0;
    stats.shift_norm_mean =
        explored_steps > 0 ? sum_shift / static_cast<double>(explored_steps) : 0.0;
    if (on_epoch) on_epoch(stats);
  }
}

}  // namespace ovd
