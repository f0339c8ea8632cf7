#include "neuralkit/mlp.hpp"

#include <cmath>

#include "trajkit/errors.hpp"

namespace neuralkit {

using trajkit::DataError;

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))) + kSoftplusFloor;
}

namespace {

double activate(Activation act, double x) {
  switch (act) {
    case Activation::Tanh: return std::tanh(x);
    case Activation::Softplus: return softplus(x);
    default: return x;
  }
}

// Derivative in terms of the pre-activation value.
double activate_deriv(Activation act, double x) {
  switch (act) {
    case Activation::Tanh: {
      double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::Softplus: return 1.0 / (1.0 + std::exp(-x));
    default: return 1.0;
  }
}

void apply_activation(const Layer& layer, const VectorXd& pre, VectorXd& post) {
  const int split = layer.act_split >= 0 ? layer.act_split : 0;
  post.resize(pre.size());
  for (int i = 0; i < pre.size(); ++i)
    post[i] = (layer.act_split >= 0 && i < split) ? pre[i] : activate(layer.act, pre[i]);
}

}  // namespace

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

MlpParams make_mlp(const std::vector<int>& dims, const std::vector<Activation>& acts,
                   trajkit::Rng& rng) {
  if (dims.size() < 2) throw DataError("mlp needs at least one layer");
  if (acts.size() != dims.size() - 1) throw DataError("one activation per layer required");
  MlpParams p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> uni(-bound, bound);
    layer.weight.resize(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i)
      for (int j = 0; j < fan_in; ++j) layer.weight(i, j) = uni(rng);
    layer.bias = VectorXd::Zero(fan_out);
    layer.act = acts[l];
    p.layers.push_back(std::move(layer));
  }
  return p;
}

VectorXd mlp_forward(const MlpParams& p, const VectorXd& input, ForwardCache* cache) {
  if (p.layers.empty()) throw DataError("empty mlp");
  if (input.size() != p.input_dim())
    throw DataError("mlp input size " + std::to_string(input.size()) + " != expected " +
                    std::to_string(p.input_dim()));
  if (cache) {
    cache->input = input;
    cache->pre.clear();
    cache->post.clear();
  }
  VectorXd x = input;
  VectorXd pre, post;
  for (const auto& layer : p.layers) {
    pre.noalias() = layer.weight * x;
    pre += layer.bias;
    apply_activation(layer, pre, post);
    if (cache) {
      cache->pre.push_back(pre);
      cache->post.push_back(post);
    }
    x = post;
  }
  return x;
}

GradientBundle GradientBundle::zeros_like(const MlpParams& p) {
  GradientBundle g;
  for (const auto& l : p.layers) {
    g.d_weight.push_back(MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
    g.d_bias.push_back(VectorXd::Zero(l.bias.size()));
  }
  return g;
}

void GradientBundle::add_scaled(const GradientBundle& other, double scale) {
  for (std::size_t l = 0; l < d_weight.size(); ++l) {
    d_weight[l] += scale * other.d_weight[l];
    d_bias[l] += scale * other.d_bias[l];
  }
}

void GradientBundle::scale(double s) {
  for (std::size_t l = 0; l < d_weight.size(); ++l) {
    d_weight[l] *= s;
    d_bias[l] *= s;
  }
}

void GradientBundle::set_zero() {
  for (std::size_t l = 0; l < d_weight.size(); ++l) {
    d_weight[l].setZero();
    d_bias[l].setZero();
  }
}

bool GradientBundle::all_finite() const {
  for (std::size_t l = 0; l < d_weight.size(); ++l)
    if (!d_weight[l].allFinite() || !d_bias[l].allFinite()) return false;
  return true;
}

VectorXd mlp_backward(const MlpParams& p, const ForwardCache& cache,
                      const VectorXd& output_grad, GradientBundle& accum) {
  const std::size_t n_layers = p.layers.size();
  if (cache.pre.size() != n_layers || cache.post.size() != n_layers)
    throw DataError("stale forward cache");
  if (cache.input.size() != p.input_dim() || output_grad.size() != p.output_dim())
    throw DataError("stale forward cache");
  if (accum.d_weight.size() != n_layers) throw DataError("gradient bundle shape mismatch");

  VectorXd grad = output_grad;
  for (std::size_t l = n_layers; l-- > 0;) {
    const Layer& layer = p.layers[l];
    const VectorXd& pre = cache.pre[l];
    VectorXd delta(pre.size());
    const int split = layer.act_split >= 0 ? layer.act_split : 0;
    for (int i = 0; i < pre.size(); ++i) {
      const bool linear_head = layer.act_split >= 0 && i < split;
      delta[i] = grad[i] * (linear_head ? 1.0 : activate_deriv(layer.act, pre[i]));
    }
    const VectorXd& layer_in = (l == 0) ? cache.input : cache.post[l - 1];
    accum.d_weight[l].noalias() += delta * layer_in.transpose();
    accum.d_bias[l] += delta;
    grad.noalias() = layer.weight.transpose() * delta;
  }
  return grad;
}

}  // namespace neuralkit
