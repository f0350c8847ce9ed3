#include "ppath/rl/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppath/linalg.hpp"

namespace ppath::rl {

void RunConfig::validate() const {
  if (max_steps < 1) throw Error(ErrorKind::InvalidConfig, "max_steps must be >= 1");
  if (eval_interval < 1) throw Error(ErrorKind::InvalidConfig, "eval_interval must be >= 1");
  if (eval_episodes < 1) throw Error(ErrorKind::InvalidConfig, "eval_episodes must be >= 1");
  if (archive_interval < 1) throw Error(ErrorKind::InvalidConfig, "archive_interval must be >= 1");
  if (!(env.dt > 0.0) || env.action_cost < 0.0 || env.horizon < 1) {
    throw Error(ErrorKind::InvalidConfig, "env.dt > 0, env.action_cost >= 0 and env.horizon >= 1 required");
  }
  agent.validate();
  if (pptb_enabled) pptb.validate();
}

std::vector<double> EvalReport::returns() const {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  for (const auto& c : checkpoints) out.push_back(c.avg_return);
  return out;
}

void EvalReport::normalize_against(double random_score, double random_auc, double base_score, double base_auc) {
  normalized_score = normalize(score, random_score, base_score);
  normalized_auc = normalize(auc, random_auc, base_auc);
}

std::pair<double, double> score_auc(const std::vector<double>& eval_returns) {
  if (eval_returns.empty()) throw Error(ErrorKind::EmptyInput, "no evaluation returns");
  const double mx = *std::max_element(eval_returns.begin(), eval_returns.end());
  const double mean = std::accumulate(eval_returns.begin(), eval_returns.end(), 0.0) /
                      static_cast<double>(eval_returns.size());
  return {mx, mean};
}

double normalize(double metric, double random_baseline, double base_algo) {
  const double denom = base_algo - random_baseline;
  if (denom == 0.0) throw Error(ErrorKind::DegenerateBaseline, "base algorithm equals the random baseline");
  return (metric - random_baseline) / denom;
}

Mlp make_actor(const RunConfig& config) {
  return Mlp({PointMassEnv::kObsDim, config.agent.hidden, config.agent.hidden, PointMassEnv::kActDim},
             Activation::Tanh);
}

double evaluate_policy(const Mlp& actor, const PointMassConfig& env_config, std::size_t episodes,
                       std::uint64_t eval_seed) {
  PointMassEnv env(env_config);
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    std::mt19937_64 rng(eval_seed + e);
    Vec obs = env.reset(rng);
    double ret = 0.0;
    for (bool done = false; !done;) {
      const StepResult r = env.step(actor.evaluate(obs));
      ret += r.reward;
      obs = r.observation;
      done = r.done;
    }
    total += ret;
  }
  return total / static_cast<double>(episodes);
}

double evaluate_random(const PointMassConfig& env_config, std::size_t episodes, std::uint64_t eval_seed) {
  PointMassEnv env(env_config);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    std::mt19937_64 rng(eval_seed + e);
    env.reset(rng);
    for (bool done = false; !done;) {
      const double ax = ud(rng);
      const double ay = ud(rng);
      const StepResult r = env.step(Eigen::Vector2d(ax, ay));
      total += r.reward;
      done = r.done;
    }
  }
  return total / static_cast<double>(episodes);
}

TrainResult train(const RunConfig& config) {
  config.validate();
  std::mt19937_64 env_rng(config.seed * 0x9E3779B97F4A7C15ULL + 1);
  PointMassEnv env(config.env);
  Td3LiteAgent agent(PointMassEnv::kObsDim, PointMassEnv::kActDim, config.agent, config.seed);
  const std::vector<LayerSegment> layers = agent.actor().layer_segments();

  TrainResult out;
  out.path.layers = layers;
  std::vector<Vec> archived;
  auto archive = [&](std::uint64_t step) {
    out.path.steps.push_back(step);
    archived.push_back(agent.actor().params());
  };
  auto evaluate = [&](std::uint64_t step) {
    out.report.checkpoints.push_back({step, evaluate_policy(agent.actor(), config.env, config.eval_episodes,
                                                            config.eval_seed)});
  };

  std::optional<PolicyPathBuffer> buffer;
  if (config.pptb_enabled) {
    buffer.emplace(config.pptb.capacity_k);
    buffer->push(0, agent.actor().params());
  }
  archive(0);
  evaluate(0);

  Vec obs = env.reset(env_rng);
  for (std::uint64_t t = 1; t <= config.max_steps; ++t) {
    const bool warmup = t <= config.agent.start_steps;
    const Vec action = warmup ? agent.random_action() : agent.explore(obs);
    const StepResult r = env.step(action);
    // Episodes end only on the time limit, so the bootstrap is never cut.
    agent.replay().add(obs, action, config.agent.reward_scale * r.reward, r.observation, false);
    obs = r.done ? env.reset(env_rng) : r.observation;

    if (!warmup && agent.replay().size() >= config.agent.batch_size) agent.update_from_replay();

    if (buffer) {
      const SchedulerAction act = scheduler_step(t, config.pptb, *buffer, agent.actor().params(), layers);
      if (act.transformed) {
        agent.actor().set_params(*act.transformed);
        ++out.transforms;
      }
    }
    if (t % config.archive_interval == 0) archive(t);
    if (t % config.eval_interval == 0) evaluate(t);
  }

  out.path.params.resize(static_cast<Index>(archived.size()), agent.actor().num_params());
  for (std::size_t i = 0; i < archived.size(); ++i) out.path.params.row(static_cast<Index>(i)) = archived[i].transpose();
  std::tie(out.report.score, out.report.auc) = score_auc(out.report.returns());
  out.random_return = evaluate_random(config.env, config.eval_episodes, config.eval_seed);
  return out;
}

MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) throw Error(ErrorKind::EmptyInput, "no samples");
  MeanStd r;
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return r;
}

BatchSummary train_batch(const RunConfig& config, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error(ErrorKind::EmptyInput, "no seeds");
  BatchSummary s;
  std::vector<double> scores, aucs;
  for (std::uint64_t seed : seeds) {
    RunConfig c = config;
    c.seed = seed;
    s.runs.push_back(train(c));
    scores.push_back(s.runs.back().report.score);
    aucs.push_back(s.runs.back().report.auc);
  }
  s.score = mean_std(scores);
  s.auc = mean_std(aucs);
  s.mean_curve.checkpoints = s.runs.front().report.checkpoints;
  for (std::size_t k = 0; k < s.mean_curve.checkpoints.size(); ++k) {
    double acc = 0.0;
    for (const auto& run : s.runs) acc += run.report.checkpoints[k].avg_return;
    s.mean_curve.checkpoints[k].avg_return = acc / static_cast<double>(s.runs.size());
  }
  std::tie(s.mean_curve.score, s.mean_curve.auc) = score_auc(s.mean_curve.returns());
  return s;
}

DeltaStats delta_stats(const std::vector<double>& deltas) {
  if (deltas.empty()) throw Error(ErrorKind::EmptyInput, "no deltas");
  DeltaStats s;
  s.delta = mean_std(deltas);
  std::vector<double> abs(deltas.size());
  std::transform(deltas.begin(), deltas.end(), abs.begin(), [](double d) { return std::abs(d); });
  s.abs_delta = mean_std(abs);
  s.max = *std::max_element(deltas.begin(), deltas.end());
  s.min = *std::min_element(deltas.begin(), deltas.end());
  return s;
}

std::vector<Index> default_rt_grid() { return {1, 2, 4, 8, 16, 32, 64, 128}; }

std::vector<ReconRow> reconstruction_check(const ParameterPath& path, const Mlp& actor_template,
                                           const PointMassConfig& env, const std::vector<Index>& r_t_grid,
                                           std::size_t episodes, std::uint64_t eval_seed) {
  if (path.size() < 2) throw Error(ErrorKind::PathTooShort, "reconstruction needs at least 2 snapshots");
  if (path.width() != actor_template.num_params()) {
    throw Error(ErrorKind::ShapeMismatch, "path width " + std::to_string(path.width()) +
                                              " does not match the policy's " +
                                              std::to_string(actor_template.num_params()) + " parameters");
  }
  const TemporalSvd<double> svd = temporal_svd(path.params);
  for (Index r : r_t_grid) {
    if (r < 1 || r > svd.rank()) {
      throw Error(ErrorKind::InvalidRank, "r_t=" + std::to_string(r) + " outside [1, " + std::to_string(svd.rank()) + "]");
    }
  }

  Mlp policy = actor_template;
  std::vector<double> original(static_cast<std::size_t>(path.size()));
  for (Index i = 0; i < path.size(); ++i) {
    policy.set_params(path.params.row(i).transpose());
    original[static_cast<std::size_t>(i)] = evaluate_policy(policy, env, episodes, eval_seed);
  }

  std::vector<ReconRow> rows;
  for (Index r : r_t_grid) {
    std::vector<double> deltas, recon;
    for (Index i = 0; i < path.size(); ++i) {
      policy.set_params(ppt(svd, i, r));
      recon.push_back(evaluate_policy(policy, env, episodes, eval_seed));
      deltas.push_back(recon.back() - original[static_cast<std::size_t>(i)]);
    }
    ReconRow row;
    row.r_t = r;
    row.stats = delta_stats(deltas);
    row.mean_original = mean_std(original).mean;
    row.mean_reconstructed = mean_std(recon).mean;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ppath::rl
