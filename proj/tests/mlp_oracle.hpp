#ifndef PPATH_TEST_MLP_ORACLE_HPP
#define PPATH_TEST_MLP_ORACLE_HPP

#include <random>
#include <vector>

#include "ppath/rl/mlp.hpp"

namespace ppath::testing {

// Random two-hidden-layer network with at most `max_params` parameters.
inline rl::Mlp random_small_mlp(std::mt19937_64& rng, Index max_params,
                                rl::Activation hidden = rl::Activation::Tanh) {
  std::uniform_int_distribution<Index> in(1, 4), hid(2, 8), out(1, 3);
  std::bernoulli_distribution tanh_out(0.5);
  for (;;) {
    const std::vector<Index> sizes{in(rng), hid(rng), hid(rng), out(rng)};
    rl::Mlp net(sizes, tanh_out(rng) ? rl::Activation::Tanh : rl::Activation::Identity, hidden);
    if (net.num_params() > max_params) continue;
    net.init_uniform(rng);
    // Wider weights than the default init so tanh leaves its linear regime.
    net.params_mut() *= 2.0;
    return net;
  }
}

struct GradientCheck {
  double param_error = 0.0;  // ||analytic - fd|| / ||fd||
  double input_error = 0.0;
};

// Central differences of L(theta) = sum(upstream .* f(x; theta)).
inline GradientCheck finite_difference_check(rl::Mlp net, std::mt19937_64& rng, Index batch = 3, double h = 1e-6) {
  std::normal_distribution<double> nd(0.0, 1.0);
  rl::Batch x(net.input_size(), batch), up(net.output_size(), batch);
  for (Index i = 0; i < x.size(); ++i) x(i) = nd(rng);
  for (Index i = 0; i < up.size(); ++i) up(i) = nd(rng);

  net.forward(x);
  const rl::MlpGradient g = net.backward(up);

  auto loss = [&](rl::Mlp& m, const rl::Batch& in) { return (m.forward(in).array() * up.array()).sum(); };

  Vec fd(net.num_params());
  for (Index k = 0; k < net.num_params(); ++k) {
    const double keep = net.params()(k);
    net.params_mut()(k) = keep + h;
    const double plus = loss(net, x);
    net.params_mut()(k) = keep - h;
    const double minus = loss(net, x);
    net.params_mut()(k) = keep;
    fd(k) = (plus - minus) / (2.0 * h);
  }
  rl::Batch fd_in(x.rows(), x.cols());
  for (Index k = 0; k < x.size(); ++k) {
    rl::Batch xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    fd_in(k) = (loss(net, xp) - loss(net, xm)) / (2.0 * h);
  }

  GradientCheck out;
  out.param_error = (g.params - fd).norm() / std::max(fd.norm(), 1e-300);
  out.input_error = (g.input - fd_in).norm() / std::max(fd_in.norm(), 1e-300);
  return out;
}

}  // namespace ppath::testing

#endif  // PPATH_TEST_MLP_ORACLE_HPP
