#include "tvae/model.hpp"

#include <cmath>

#include "trajkit/errors.hpp"

namespace tvae {

using trajkit::DataError;

void validate(const LatentGaussian& g) {
  if (g.mean.size() != g.std.size()) throw DataError("latent: mean/std size mismatch");
  if (g.mean.size() == 0) throw DataError("latent: empty");
  for (Eigen::Index k = 0; k < g.std.size(); ++k)
    if (!(g.std[k] > 0.0)) throw DataError("latent: non-positive sigma");
  if (!g.mean.allFinite() || !g.std.allFinite()) throw DataError("latent: non-finite");
}

Standardizer fit_standardizer(const std::vector<const trajkit::DatasetEntry*>& entries) {
  Vec3 sum = Vec3::Zero();
  Vec3 sum_sq = Vec3::Zero();
  std::size_t n = 0;
  for (const trajkit::DatasetEntry* entry : entries) {
    const trajkit::Trajectory& traj = entry->traj;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (!traj.is_valid_sample(i)) continue;
      sum += traj.positions[i];
      sum_sq += traj.positions[i].cwiseProduct(traj.positions[i]);
      ++n;
    }
  }
  if (n < 2) throw DataError("standardizer: need at least 2 samples");
  Standardizer out;
  out.mean = sum / static_cast<double>(n);
  const Vec3 var = sum_sq / static_cast<double>(n) - out.mean.cwiseProduct(out.mean);
  for (int c = 0; c < 3; ++c)
    out.stdev[c] = std::sqrt(std::max(var[c], 1e-12));
  return out;
}

TvaeModel make_model(int latent_dim, int hidden, bool ci, const trajkit::TimeGrid& grid,
                     trajkit::Rng& rng) {
  if (latent_dim < 1 || hidden < 1) throw DataError("model: latent_dim and hidden must be >= 1");
  validate(grid);
  TvaeModel m;
  m.ci = ci;
  m.latent_dim = latent_dim;
  m.hidden = hidden;
  m.grid = grid;
  using neuralkit::Activation;
  m.encoder = neuralkit::make_mlp({m.conditioning_dim(), hidden, 2 * latent_dim},
                                  {Activation::Tanh, Activation::Softplus}, rng);
  m.encoder.layers.back().act_split = latent_dim;
  m.decoder = neuralkit::make_mlp({m.decoder_input_dim(), hidden, 3 * grid.steps},
                                  {Activation::Tanh, Activation::Identity}, rng);
  return m;
}

void validate(const TvaeModel& m) {
  if (m.latent_dim < 1) throw DataError("model: latent_dim must be >= 1");
  validate(m.grid);
  if (m.encoder.input_dim() != m.conditioning_dim() ||
      m.encoder.output_dim() != 2 * m.latent_dim)
    throw DataError("model: encoder shape inconsistent with K and grid");
  if (m.encoder.layers.back().act_split != m.latent_dim)
    throw DataError("model: encoder output layer must split mu from sigma");
  if (m.decoder.input_dim() != m.decoder_input_dim() ||
      m.decoder.output_dim() != 3 * m.grid.steps)
    throw DataError("model: decoder shape inconsistent with K, ci and grid");
  if (!m.log_sigma_y.allFinite()) throw DataError("model: non-finite log_sigma_y");
  for (int c = 0; c < 3; ++c)
    if (!(m.norm.stdev[c] > 0.0)) throw DataError("model: non-positive standardizer stdev");
}

Eigen::VectorXd encoder_input(const TvaeModel& m, const trajkit::MaskedTrajectory& x) {
  if (x.size() != m.grid.steps)
    throw DataError("grid mismatch: input has " + std::to_string(x.size()) +
                    " steps, model expects " + std::to_string(m.grid.steps));
  const int n = m.grid.steps;
  Eigen::VectorXd input(4 * n);
  for (int i = 0; i < n; ++i) {
    const double on = x.mask[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    const Vec3 v = on != 0.0 ? m.norm.to_std(x.values[static_cast<std::size_t>(i)])
                             : Vec3::Zero();
    input.segment<3>(3 * i) = on * v;
    input[3 * n + i] = on;
  }
  return input;
}

LatentGaussian encode(const TvaeModel& m, const trajkit::MaskedTrajectory& x) {
  const Eigen::VectorXd out = neuralkit::mlp_forward(m.encoder, encoder_input(m, x));
  LatentGaussian g;
  g.mean = out.head(m.latent_dim);
  g.std = out.tail(m.latent_dim);
  validate(g);
  return g;
}

Eigen::VectorXd decode_std(const TvaeModel& m, const Eigen::VectorXd& z,
                           const trajkit::MaskedTrajectory& x,
                           neuralkit::ForwardCache* cache) {
  if (z.size() != m.latent_dim)
    throw DataError("decode: latent has " + std::to_string(z.size()) + " dims, model expects " +
                    std::to_string(m.latent_dim));
  if (m.ci) return neuralkit::mlp_forward(m.decoder, z, cache);
  Eigen::VectorXd input(m.decoder_input_dim());
  input.head(m.latent_dim) = z;
  input.tail(m.conditioning_dim()) = encoder_input(m, x);
  return neuralkit::mlp_forward(m.decoder, input, cache);
}

std::vector<Vec3> decode(const TvaeModel& m, const Eigen::VectorXd& z,
                         const trajkit::MaskedTrajectory& x) {
  const Eigen::VectorXd out = decode_std(m, z, x);
  std::vector<Vec3> positions(static_cast<std::size_t>(m.grid.steps));
  for (int i = 0; i < m.grid.steps; ++i)
    positions[static_cast<std::size_t>(i)] = m.norm.to_meters(out.segment<3>(3 * i));
  return positions;
}

double gaussian_kl(const LatentGaussian& q, const LatentGaussian& p) {
  validate(q);
  validate(p);
  if (q.dim() != p.dim()) throw DataError("kl: dimension mismatch");
  double kl = 0.0;
  for (Eigen::Index k = 0; k < q.mean.size(); ++k) {
    const double dq = q.std[k], dp = p.std[k];
    const double dm = q.mean[k] - p.mean[k];
    kl += std::log(dp / dq) + (dq * dq + dm * dm) / (2.0 * dp * dp) - 0.5;
  }
  return kl;
}

}  // namespace tvae
