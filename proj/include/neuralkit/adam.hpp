#pragma once

#include "neuralkit/mlp.hpp"

namespace neuralkit {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool plain_sgd = false;  // disables the moment machinery, p -= lr * g
};

/// First/second moment accumulators for one MlpParams plus step count.
struct OptimizerState {
  GradientBundle first_moment;
  GradientBundle second_moment;
  std::int64_t step = 0;
  AdamConfig cfg;

  static OptimizerState init(const MlpParams& p, const AdamConfig& cfg);
};

/// Bias-corrected Adam update in place. Throws NumericError("exploded ...")
/// naming the offending tensor when a gradient is non-finite.
void adam_update(OptimizerState& state, MlpParams& p, const GradientBundle& g);

/// Same update rule for a bare vector parameter (the learned observation
/// noise uses this).
struct VectorOptimizerState {
  VectorXd first_moment;
  VectorXd second_moment;
  std::int64_t step = 0;
  AdamConfig cfg;

  static VectorOptimizerState init(int dim, const AdamConfig& cfg);
};

void adam_update(VectorOptimizerState& state, VectorXd& p, const VectorXd& g,
                 const char* tensor_name = "vector");

}  // namespace neuralkit
