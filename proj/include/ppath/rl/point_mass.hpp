#ifndef PPATH_RL_POINT_MASS_HPP
#define PPATH_RL_POINT_MASS_HPP

#include <cstddef>
#include <random>

#include <Eigen/Core>

namespace ppath::rl {

struct PointMassConfig {
  double dt = 0.05;
  double action_cost = 0.1;
  std::size_t horizon = 200;
  Eigen::Vector2d goal = Eigen::Vector2d::Zero();
};

struct StepResult {
  Eigen::Vector4d observation;
  double reward = 0.0;
  bool done = false;
};

// Deterministic 2-D double integrator with quadratic cost:
//   x' = x + dt v,  v' = v + dt a,  r = -(|x' - g|^2 + c |a|^2),  |a_i| <= 1.
// Observation is (x - g, v). Episodes start at rest, x ~ U[-1, 1]^2.
class PointMassEnv {
 public:
  static constexpr int kObsDim = 4;
  static constexpr int kActDim = 2;

  explicit PointMassEnv(PointMassConfig config = {});

  Eigen::Vector4d reset(std::mt19937_64& rng);
  Eigen::Vector4d reset_to(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity);
  StepResult step(const Eigen::Vector2d& action);

  Eigen::Vector4d observation() const;
  const Eigen::Vector2d& position() const { return position_; }
  const Eigen::Vector2d& velocity() const { return velocity_; }
  std::size_t elapsed() const { return elapsed_; }
  const PointMassConfig& config() const { return config_; }

 private:
  PointMassConfig config_;
  Eigen::Vector2d position_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity_ = Eigen::Vector2d::Zero();
  std::size_t elapsed_ = 0;
};

}  // namespace ppath::rl

#endif  // PPATH_RL_POINT_MASS_HPP
