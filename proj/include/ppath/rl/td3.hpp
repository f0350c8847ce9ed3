#ifndef PPATH_RL_TD3_HPP
#define PPATH_RL_TD3_HPP

#include <cstddef>
#include <random>

#include "ppath/rl/mlp.hpp"

namespace ppath::rl {

struct Td3Config {
  Index hidden = 32;
  double gamma = 0.99;
  double tau = 0.005;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  std::size_t batch_size = 256;
  std::size_t replay_capacity = 100000;
  std::size_t start_steps = 1000;  // uniform random actions, no learning
  double expl_noise = 0.1;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  int policy_delay = 2;
  bool relu_critics = false;  // tanh hidden units otherwise
  double reward_scale = 1.0;  // applied to rewards entering the replay buffer

  void validate() const;
};

struct TransitionBatch {
  Batch obs;       // obs_dim x B
  Batch action;    // act_dim x B
  Eigen::RowVectorXd reward;
  Batch next_obs;
  Eigen::RowVectorXd not_done;

  Index size() const { return obs.cols(); }
};

// Uniform-sampling ring buffer.
class ReplayBuffer {
 public:
  ReplayBuffer(Index obs_dim, Index act_dim, std::size_t capacity);

  void add(const Eigen::Ref<const Vec>& obs, const Eigen::Ref<const Vec>& action, double reward,
           const Eigen::Ref<const Vec>& next_obs, bool terminal);
  TransitionBatch sample(std::size_t batch_size, std::mt19937_64& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  Batch obs_, action_, next_obs_;
  Eigen::RowVectorXd reward_, not_done_;
};

struct UpdateInfo {
  double critic_loss = 0.0;
  bool actor_updated = false;
};

// Twin critics, target policy smoothing, delayed actor and Polyak targets.
class Td3LiteAgent {
 public:
  Td3LiteAgent(Index obs_dim, Index act_dim, Td3Config config, std::uint64_t seed);

  Vec act(const Eigen::Ref<const Vec>& obs) const;
  Vec explore(const Eigen::Ref<const Vec>& obs);
  Vec random_action();

  // y = r + gamma * not_done * min(Q1', Q2')(s', clip(pi'(s') + clip(eps)))
  Eigen::RowVectorXd critic_targets(const TransitionBatch& batch);

  UpdateInfo update(const TransitionBatch& batch);
  // Samples from replay; throws InsufficientData below one batch.
  UpdateInfo update_from_replay();

  Mlp& actor() { return actor_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& actor_target() const { return actor_target_; }
  const Mlp& critic(int i) const { return i == 0 ? critic1_ : critic2_; }
  const Mlp& critic_target(int i) const { return i == 0 ? critic1_target_ : critic2_target_; }
  ReplayBuffer& replay() { return replay_; }
  const Td3Config& config() const { return config_; }
  long critic_updates() const { return updates_; }

 private:
  Td3Config config_;
  Index act_dim_;
  std::mt19937_64 rng_;
  Mlp actor_, actor_target_;
  Mlp critic1_, critic2_, critic1_target_, critic2_target_;
  Adam actor_opt_, critic1_opt_, critic2_opt_;
  ReplayBuffer replay_;
  long updates_ = 0;
};

// One TD3 update on a given batch (the agent's own sampling is bypassed).
inline UpdateInfo td3_update(Td3LiteAgent& agent, const TransitionBatch& batch) { return agent.update(batch); }

}  // namespace ppath::rl

#endif  // PPATH_RL_TD3_HPP
