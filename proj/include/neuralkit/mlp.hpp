#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "trajkit/rng.hpp"

namespace neuralkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Elementwise nonlinearities. Softplus is log(1+e^x) + 1e-4, the form used
/// for standard-deviation outputs so they stay strictly positive.
enum class Activation : std::uint32_t { Identity = 0, Tanh = 1, Softplus = 2 };

double softplus(double x);
constexpr double kSoftplusFloor = 1e-4;

/// One dense layer. When act_split >= 0 the activation applies only to
/// output coordinates [act_split, out) and the head stays linear — the
/// encoder uses this to emit (mu, softplus sigma) from a single layer.
struct Layer {
  MatrixXd weight;  // [out x in]
  VectorXd bias;    // [out]
  Activation act = Activation::Identity;
  int act_split = -1;

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }
};

struct MlpParams {
  std::vector<Layer> layers;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }
  std::size_t parameter_count() const;
};

/// Glorot-uniform weights, zero biases. dims = {in, hidden..., out};
/// acts has one entry per layer (dims.size() - 1).
MlpParams make_mlp(const std::vector<int>& dims, const std::vector<Activation>& acts,
                   trajkit::Rng& rng);

/// Pre- and post-activation values retained by forward for the backward pass.
struct ForwardCache {
  VectorXd input;
  std::vector<VectorXd> pre;
  std::vector<VectorXd> post;
};

VectorXd mlp_forward(const MlpParams& p, const VectorXd& input, ForwardCache* cache = nullptr);

/// Per-parameter loss gradients, shape-congruent with an MlpParams.
struct GradientBundle {
  std::vector<MatrixXd> d_weight;
  std::vector<VectorXd> d_bias;

  static GradientBundle zeros_like(const MlpParams& p);
  void add_scaled(const GradientBundle& other, double scale);
  void scale(double s);
  void set_zero();
  bool all_finite() const;
};

/// Reverse-mode pass: accumulates d(output_grad . output)/d(params) into
/// `accum` and returns the gradient with respect to the input. The cache
/// must come from a forward call on the same parameters.
VectorXd mlp_backward(const MlpParams& p, const ForwardCache& cache,
                      const VectorXd& output_grad, GradientBundle& accum);

}  // namespace neuralkit
