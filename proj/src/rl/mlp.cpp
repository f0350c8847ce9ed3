#include "ppath/rl/mlp.hpp"

#include <cmath>

namespace ppath::rl {

namespace {

// tanh(x) = 1 - 2 / (exp(2x) + 1); Eigen vectorizes exp but not tanh for
// doubles. Absolute error stays within a few ulps of 1.
template <typename Derived>
void tanh_inplace(Eigen::DenseBase<Derived>& z) {
  const auto e = (2.0 * z.derived().array().min(20.0).max(-20.0)).exp().eval();
  z.derived().array() = 1.0 - 2.0 / (e + 1.0);
}

template <typename Derived>
void activate(Eigen::DenseBase<Derived>& z, Activation act) {
  switch (act) {
    case Activation::Tanh:
      tanh_inplace(z);
      break;
    case Activation::Relu:
      z.derived().array() = z.derived().array().max(0.0);
      break;
    case Activation::Identity:
      break;
  }
}

}  // namespace

Mlp::Mlp(std::vector<Index> sizes, Activation output, Activation hidden)
    : sizes_(std::move(sizes)), output_(output), hidden_(hidden) {
  if (sizes_.size() < 2) throw Error(ErrorKind::InvalidConfig, "an MLP needs at least input and output sizes");
  Index total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) throw Error(ErrorKind::InvalidConfig, "layer sizes must be positive");
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_ = Vec::Zero(total);
}

void Mlp::set_params(const Eigen::Ref<const Vec>& params) {
  if (params.size() != params_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(params_.size()) + " parameters, got " +
                                              std::to_string(params.size()));
  }
  params_ = params;
  cache_.clear();
}

Vec& Mlp::params_mut() {
  cache_.clear();
  return params_;
}

std::vector<LayerSegment> Mlp::layer_segments() const {
  std::vector<LayerSegment> out;
  for (Index l = 0; l < num_layers(); ++l) {
    const Index len = sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    out.push_back({"Layer" + std::to_string(l + 1), offsets_[l], len});
  }
  return out;
}

void Mlp::init_uniform(std::mt19937_64& rng) {
  cache_.clear();
  for (Index l = 0; l < num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> ud(-bound, bound);
    const Index len = sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    for (Index k = 0; k < len; ++k) params_(offsets_[l] + k) = ud(rng);
  }
}

Eigen::Map<const RowMatrix<double>> Mlp::weight(Index layer) const {
  return {params_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Vec> Mlp::bias(Index layer) const {
  return {params_.data() + offsets_[layer] + sizes_[layer + 1] * sizes_[layer], sizes_[layer + 1]};
}

Batch Mlp::forward(const Batch& x) {
  if (x.rows() != input_size()) throw Error(ErrorKind::ShapeMismatch, "input has wrong dimension");
  cache_.clear();
  cache_.push_back(x);
  for (Index l = 0; l < num_layers(); ++l) {
    Batch z = weight(l) * cache_.back();
    z.colwise() += bias(l);
    activate(z, l + 1 < num_layers() ? hidden_ : output_);
    cache_.push_back(std::move(z));
  }
  return cache_.back();
}

Vec Mlp::evaluate(const Eigen::Ref<const Vec>& x) const {
  if (x.size() != input_size()) throw Error(ErrorKind::ShapeMismatch, "input has wrong dimension");
  Vec a = x;
  for (Index l = 0; l < num_layers(); ++l) {
    Vec z = weight(l) * a + bias(l);
    activate(z, l + 1 < num_layers() ? hidden_ : output_);
    a = std::move(z);
  }
  return a;
}

MlpGradient Mlp::backward(const Batch& upstream) const {
  if (cache_.size() != sizes_.size()) throw Error(ErrorKind::StaleCache, "backward() without a cached forward pass");
  if (upstream.rows() != output_size() || upstream.cols() != cache_.back().cols()) {
    throw Error(ErrorKind::StaleCache, "upstream gradient does not match the cached batch");
  }
  MlpGradient g;
  g.params = Vec::Zero(params_.size());
  Batch delta = upstream;
  for (Index l = num_layers(); l-- > 0;) {
    const Batch& out = cache_[static_cast<std::size_t>(l + 1)];
    const Batch& in = cache_[static_cast<std::size_t>(l)];
    switch (l + 1 < num_layers() ? hidden_ : output_) {
      case Activation::Tanh:
        delta.array() *= 1.0 - out.array().square();
        break;
      case Activation::Relu:
        delta.array() *= (out.array() > 0.0).cast<double>();
        break;
      case Activation::Identity:
        break;
    }
    Eigen::Map<RowMatrix<double>> gw(g.params.data() + offsets_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<Vec> gb(g.params.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], sizes_[l + 1]);
    gw.noalias() = delta * in.transpose();
    gb = delta.rowwise().sum();
    delta = weight(l).transpose() * delta;
  }
  g.input = std::move(delta);
  return g;
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (target.num_params() != online.num_params()) throw Error(ErrorKind::ShapeMismatch, "network shapes differ");
  Vec& t = target.params_mut();
  t = tau * online.params() + (1.0 - tau) * t;
}

Adam::Adam(Index size, AdamConfig config) : config_(config), m_(Vec::Zero(size)), v_(Vec::Zero(size)) {}

void Adam::step(Vec& params, const Vec& grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) throw Error(ErrorKind::ShapeMismatch, "Adam size mismatch");
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  params.array() -= config_.lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.eps);
}

}  // namespace ppath::rl
