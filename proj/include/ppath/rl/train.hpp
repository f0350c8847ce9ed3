#ifndef PPATH_RL_TRAIN_HPP
#define PPATH_RL_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ppath/path.hpp"
#include "ppath/pptb.hpp"
#include "ppath/rl/mlp.hpp"
#include "ppath/rl/point_mass.hpp"
#include "ppath/rl/td3.hpp"

namespace ppath::rl {

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 30000;
  std::uint64_t eval_interval = 1000;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_seed = 1000003;     // evaluation start states, shared by every run
  std::uint64_t archive_interval = 100;  // full-path snapshot interval
  bool pptb_enabled = false;
  PptbConfig pptb;
  PointMassConfig env;
  Td3Config agent;

  void validate() const;
};

struct Checkpoint {
  std::uint64_t step = 0;
  double avg_return = 0.0;
};

struct EvalReport {
  std::vector<Checkpoint> checkpoints;
  double score = 0.0;  // max of the averages
  double auc = 0.0;    // mean of the averages
  std::optional<double> normalized_score;
  std::optional<double> normalized_auc;

  std::vector<double> returns() const;
  // Fills the normalized fields against (random, base) anchors.
  void normalize_against(double random_score, double random_auc, double base_score, double base_auc);
};

struct TrainResult {
  ParameterPath path;
  EvalReport report;
  std::size_t transforms = 0;
  double random_return = 0.0;  // uniform-random policy on the same evaluation starts
};

// (max, mean); throws EmptyInput.
std::pair<double, double> score_auc(const std::vector<double>& eval_returns);

// (metric - random) / (base - random); throws DegenerateBaseline when base == random.
double normalize(double metric, double random_baseline, double base_algo);

Mlp make_actor(const RunConfig& config);

// Average return of the deterministic policy over `episodes` episodes whose
// start states are drawn from eval_seed + episode.
double evaluate_policy(const Mlp& actor, const PointMassConfig& env, std::size_t episodes, std::uint64_t eval_seed);
double evaluate_random(const PointMassConfig& env, std::size_t episodes, std::uint64_t eval_seed);

// Seed-deterministic training run. The archived path holds the actor every
// archive_interval steps (step 0 included); with PPTB enabled the scheduler
// hook runs after every learning step.
TrainResult train(const RunConfig& config);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(const std::vector<double>& xs);

struct BatchSummary {
  std::vector<TrainResult> runs;
  MeanStd score;
  MeanStd auc;
  EvalReport mean_curve;  // SCORE/AUC of the seed-averaged evaluation curve
};

BatchSummary train_batch(const RunConfig& config, const std::vector<std::uint64_t>& seeds);

struct DeltaStats {
  MeanStd delta;
  MeanStd abs_delta;
  double max = 0.0;
  double min = 0.0;
};

DeltaStats delta_stats(const std::vector<double>& deltas);

struct ReconRow {
  Index r_t = 0;
  DeltaStats stats;
  double mean_original = 0.0;
  double mean_reconstructed = 0.0;
};

// For every r_t, rebuild each snapshot from its first r_t temporal-SVD
// directions and compare its return to the original's on shared evaluation
// starts: delta_R = return(reconstructed) - return(original).
std::vector<ReconRow> reconstruction_check(const ParameterPath& path, const Mlp& actor_template,
                                           const PointMassConfig& env, const std::vector<Index>& r_t_grid,
                                           std::size_t episodes, std::uint64_t eval_seed);

std::vector<Index> default_rt_grid();

}  // namespace ppath::rl

#endif  // PPATH_RL_TRAIN_HPP
