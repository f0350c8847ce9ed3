#ifndef PPATH_RL_MLP_HPP
#define PPATH_RL_MLP_HPP

#include <random>
#include <vector>

#include <Eigen/Core>

#include "ppath/path.hpp"

namespace ppath::rl {

enum class Activation { Tanh, Relu, Identity };

// Batched activations: one sample per column.
using Batch = Eigen::MatrixXd;

struct MlpGradient {
  Vec params;  // same layout as Mlp::params()
  Batch input; // d(contraction)/d(input), in x batch
};

// Fully connected network, tanh hidden units, flat parameter vector. Layer l
// stores W_l (out x in, row-major) followed by b_l and is exposed as the
// segment "Layer{l+1}".
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<Index> sizes, Activation output, Activation hidden = Activation::Tanh);

  Index input_size() const { return sizes_.front(); }
  Index output_size() const { return sizes_.back(); }
  Index num_layers() const { return static_cast<Index>(sizes_.size()) - 1; }
  Index num_params() const { return params_.size(); }
  const std::vector<Index>& sizes() const { return sizes_; }
  Activation output_activation() const { return output_; }
  Activation hidden_activation() const { return hidden_; }

  const Vec& params() const { return params_; }
  void set_params(const Eigen::Ref<const Vec>& params);
  // Mutable access drops the forward cache.
  Vec& params_mut();

  std::vector<LayerSegment> layer_segments() const;

  // PyTorch-style uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init_uniform(std::mt19937_64& rng);

  // Caches activations for backward().
  Batch forward(const Batch& x);
  // Cache-free single-sample evaluation.
  Vec evaluate(const Eigen::Ref<const Vec>& x) const;

  // Reverse-mode gradient of sum(upstream .* output) w.r.t. parameters and
  // input, using the most recent forward() batch. Throws StaleCache if there is
  // no matching cached forward pass.
  MlpGradient backward(const Batch& upstream) const;

 private:
  Eigen::Map<const RowMatrix<double>> weight(Index layer) const;
  Eigen::Map<const Vec> bias(Index layer) const;

  std::vector<Index> sizes_;
  std::vector<Index> offsets_;  // start of each layer's block
  Activation output_ = Activation::Identity;
  Activation hidden_ = Activation::Tanh;
  Vec params_;
  std::vector<Batch> cache_;  // layer inputs, then final output
};

// mlp_forward for one state; the actor's output is already tanh-bounded.
inline Vec mlp_forward(const Mlp& net, const Eigen::Ref<const Vec>& state) { return net.evaluate(state); }

// target <- tau * online + (1 - tau) * target
void soft_update(Mlp& target, const Mlp& online, double tau);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-parameter adaptive moments with bias correction.
class Adam {
 public:
  Adam() = default;
  Adam(Index size, AdamConfig config);

  void step(Vec& params, const Vec& grad);
  long steps() const { return t_; }

 private:
  AdamConfig config_;
  Vec m_, v_;
  long t_ = 0;
};

}  // namespace ppath::rl

#endif  // PPATH_RL_MLP_HPP
