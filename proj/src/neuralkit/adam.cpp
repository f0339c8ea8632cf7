#include "neuralkit/adam.hpp"

#include <cmath>
#include <string>

#include "trajkit/errors.hpp"

namespace neuralkit {

using trajkit::NumericError;

namespace {

template <typename T>
void adam_step_array(const AdamConfig& cfg, std::int64_t step, T& m, T& v, T& p, const T& g) {
  if (cfg.plain_sgd) {
    p -= cfg.lr * g;
    return;
  }
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  const double m_corr = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double v_corr = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  p.array() -= (cfg.lr / m_corr) * m.array() / ((v.array() / v_corr).sqrt() + cfg.epsilon);
}

}  // namespace

OptimizerState OptimizerState::init(const MlpParams& p, const AdamConfig& cfg) {
  OptimizerState s;
  s.first_moment = GradientBundle::zeros_like(p);
  s.second_moment = GradientBundle::zeros_like(p);
  s.cfg = cfg;
  return s;
}

void adam_update(OptimizerState& state, MlpParams& p, const GradientBundle& g) {
  if (g.d_weight.size() != p.layers.size())
    throw trajkit::DataError("gradient bundle shape mismatch");
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    if (!g.d_weight[l].allFinite())
      throw NumericError("exploded: layer" + std::to_string(l) + ".weight");
    if (!g.d_bias[l].allFinite())
      throw NumericError("exploded: layer" + std::to_string(l) + ".bias");
  }
  ++state.step;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    adam_step_array(state.cfg, state.step, state.first_moment.d_weight[l],
                    state.second_moment.d_weight[l], p.layers[l].weight, g.d_weight[l]);
    adam_step_array(state.cfg, state.step, state.first_moment.d_bias[l],
                    state.second_moment.d_bias[l], p.layers[l].bias, g.d_bias[l]);
  }
}

VectorOptimizerState VectorOptimizerState::init(int dim, const AdamConfig& cfg) {
  VectorOptimizerState s;
  s.first_moment = VectorXd::Zero(dim);
  s.second_moment = VectorXd::Zero(dim);
  s.cfg = cfg;
  return s;
}

void adam_update(VectorOptimizerState& state, VectorXd& p, const VectorXd& g,
                 const char* tensor_name) {
  if (!g.allFinite()) throw NumericError(std::string("exploded: ") + tensor_name);
  ++state.step;
  adam_step_array(state.cfg, state.step, state.first_moment, state.second_moment, p, g);
}

}  // namespace neuralkit
