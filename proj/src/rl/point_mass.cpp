#include "ppath/rl/point_mass.hpp"

namespace ppath::rl {

PointMassEnv::PointMassEnv(PointMassConfig config) : config_(config) {}

Eigen::Vector4d PointMassEnv::reset(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start(-1.0, 1.0);
  const double x = start(rng);
  const double y = start(rng);
  return reset_to(Eigen::Vector2d(x, y), Eigen::Vector2d::Zero());
}

Eigen::Vector4d PointMassEnv::reset_to(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity) {
  position_ = position;
  velocity_ = velocity;
  elapsed_ = 0;
  return observation();
}

StepResult PointMassEnv::step(const Eigen::Vector2d& action) {
  const Eigen::Vector2d a = action.cwiseMax(-1.0).cwiseMin(1.0);
  position_ += config_.dt * velocity_;
  velocity_ += config_.dt * a;
  ++elapsed_;
  StepResult r;
  r.reward = -((position_ - config_.goal).squaredNorm() + config_.action_cost * a.squaredNorm());
  r.observation = observation();
  r.done = elapsed_ >= config_.horizon;
  return r;
}

Eigen::Vector4d PointMassEnv::observation() const {
  Eigen::Vector4d o;
  o << position_ - config_.goal, velocity_;
  return o;
}

}  // namespace ppath::rl
