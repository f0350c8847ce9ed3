#include "ppath/rl/td3.hpp"

#include <cmath>

namespace ppath::rl {

void Td3Config::validate() const {
  if (hidden < 1) throw Error(ErrorKind::InvalidConfig, "agent.hidden must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::InvalidConfig, "agent.gamma must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorKind::InvalidConfig, "agent.tau must lie in [0, 1]");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw Error(ErrorKind::InvalidConfig, "learning rates must be positive");
  if (batch_size < 1) throw Error(ErrorKind::InvalidConfig, "agent.batch_size must be >= 1");
  if (replay_capacity < batch_size) throw Error(ErrorKind::InvalidConfig, "agent.replay_capacity below batch size");
  if (expl_noise < 0.0 || policy_noise < 0.0 || noise_clip < 0.0) {
    throw Error(ErrorKind::InvalidConfig, "noise scales must be >= 0");
  }
  if (!(reward_scale > 0.0)) throw Error(ErrorKind::InvalidConfig, "agent.reward_scale must be positive");
  if (policy_delay < 1) throw Error(ErrorKind::InvalidConfig, "agent.policy_delay must be >= 1");
}

ReplayBuffer::ReplayBuffer(Index obs_dim, Index act_dim, std::size_t capacity)
    : capacity_(capacity),
      obs_(obs_dim, static_cast<Index>(capacity)),
      action_(act_dim, static_cast<Index>(capacity)),
      next_obs_(obs_dim, static_cast<Index>(capacity)),
      reward_(static_cast<Index>(capacity)),
      not_done_(static_cast<Index>(capacity)) {
  if (capacity_ < 1) throw Error(ErrorKind::InvalidConfig, "replay capacity must be >= 1");
}

void ReplayBuffer::add(const Eigen::Ref<const Vec>& obs, const Eigen::Ref<const Vec>& action, double reward,
                       const Eigen::Ref<const Vec>& next_obs, bool terminal) {
  const auto i = static_cast<Index>(next_);
  obs_.col(i) = obs;
  action_.col(i) = action;
  next_obs_.col(i) = next_obs;
  reward_(i) = reward;
  not_done_(i) = terminal ? 0.0 : 1.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

TransitionBatch ReplayBuffer::sample(std::size_t batch_size, std::mt19937_64& rng) const {
  if (size_ < batch_size) {
    throw Error(ErrorKind::InsufficientData, "replay holds " + std::to_string(size_) + " < " +
                                                 std::to_string(batch_size) + " transitions");
  }
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  const auto b = static_cast<Index>(batch_size);
  TransitionBatch out{Batch(obs_.rows(), b), Batch(action_.rows(), b), Eigen::RowVectorXd(b),
                      Batch(obs_.rows(), b), Eigen::RowVectorXd(b)};
  for (Index k = 0; k < b; ++k) {
    const auto i = static_cast<Index>(pick(rng));
    out.obs.col(k) = obs_.col(i);
    out.action.col(k) = action_.col(i);
    out.reward(k) = reward_(i);
    out.next_obs.col(k) = next_obs_.col(i);
    out.not_done(k) = not_done_(i);
  }
  return out;
}

Td3LiteAgent::Td3LiteAgent(Index obs_dim, Index act_dim, Td3Config config, std::uint64_t seed)
    : config_(config), act_dim_(act_dim), rng_(seed), replay_(obs_dim, act_dim, config.replay_capacity) {
  config_.validate();
  const Index h = config_.hidden;
  actor_ = Mlp({obs_dim, h, h, act_dim}, Activation::Tanh);
  critic1_ = Mlp({obs_dim + act_dim, h, h, 1}, Activation::Identity,
                 config_.relu_critics ? Activation::Relu : Activation::Tanh);
  critic2_ = critic1_;
  actor_.init_uniform(rng_);
  critic1_.init_uniform(rng_);
  critic2_.init_uniform(rng_);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_opt_ = Adam(actor_.num_params(), AdamConfig{.lr = config_.actor_lr});
  critic1_opt_ = Adam(critic1_.num_params(), AdamConfig{.lr = config_.critic_lr});
  critic2_opt_ = Adam(critic2_.num_params(), AdamConfig{.lr = config_.critic_lr});
}

Vec Td3LiteAgent::act(const Eigen::Ref<const Vec>& obs) const { return actor_.evaluate(obs); }

Vec Td3LiteAgent::explore(const Eigen::Ref<const Vec>& obs) {
  std::normal_distribution<double> nd(0.0, config_.expl_noise);
  Vec a = act(obs);
  for (Index i = 0; i < a.size(); ++i) a(i) = std::clamp(a(i) + (config_.expl_noise > 0 ? nd(rng_) : 0.0), -1.0, 1.0);
  return a;
}

Vec Td3LiteAgent::random_action() {
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Vec a(act_dim_);
  for (Index i = 0; i < a.size(); ++i) a(i) = ud(rng_);
  return a;
}

namespace {

Batch stack(const Batch& top, const Batch& bottom) {
  Batch out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

}  // namespace

Eigen::RowVectorXd Td3LiteAgent::critic_targets(const TransitionBatch& batch) {
  Batch next_action = actor_target_.forward(batch.next_obs);
  if (config_.policy_noise > 0.0) {
    std::normal_distribution<double> nd(0.0, config_.policy_noise);
    for (Index k = 0; k < next_action.size(); ++k) {
      const double eps = std::clamp(nd(rng_), -config_.noise_clip, config_.noise_clip);
      next_action(k) = std::clamp(next_action(k) + eps, -1.0, 1.0);
    }
  }
  const Batch sa = stack(batch.next_obs, next_action);
  const Batch q1 = critic1_target_.forward(sa);
  const Batch q2 = critic2_target_.forward(sa);
  const Eigen::RowVectorXd q_min = q1.cwiseMin(q2).row(0);
  return batch.reward + config_.gamma * batch.not_done.cwiseProduct(q_min);
}

UpdateInfo Td3LiteAgent::update(const TransitionBatch& batch) {
  if (batch.size() < 1) throw Error(ErrorKind::InsufficientData, "empty batch");
  UpdateInfo info;
  const Eigen::RowVectorXd y = critic_targets(batch);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const Batch sa = stack(batch.obs, batch.action);

  // L = mean 0.5 (Q - y)^2 per critic
  for (auto [net, opt] : {std::pair{&critic1_, &critic1_opt_}, std::pair{&critic2_, &critic2_opt_}}) {
    const Batch q = net->forward(sa);
    const Eigen::RowVectorXd err = q.row(0) - y;
    info.critic_loss += 0.5 * err.squaredNorm() * inv_b;
    const MlpGradient g = net->backward(err * inv_b);
    opt->step(net->params_mut(), g.params);
  }
  ++updates_;

  if (updates_ % config_.policy_delay == 0) {
    // Deterministic policy gradient: ascend Q1(s, pi(s)).
    const Batch a = actor_.forward(batch.obs);
    critic1_.forward(stack(batch.obs, a));
    const MlpGradient gq = critic1_.backward(Batch::Constant(1, batch.size(), -inv_b));
    const Batch da = gq.input.bottomRows(act_dim_);
    const MlpGradient ga = actor_.backward(da);
    actor_opt_.step(actor_.params_mut(), ga.params);

    soft_update(critic1_target_, critic1_, config_.tau);
    soft_update(critic2_target_, critic2_, config_.tau);
    soft_update(actor_target_, actor_, config_.tau);
    info.actor_updated = true;
  }
  return info;
}

UpdateInfo Td3LiteAgent::update_from_replay() { return update(replay_.sample(config_.batch_size, rng_)); }

}  // namespace ppath::rl
