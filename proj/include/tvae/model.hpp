#pragma once

#include <vector>

#include "neuralkit/mlp.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace tvae {

using trajkit::Vec3;

/// Diagonal Gaussian over the latent code.
struct LatentGaussian {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Throws DataError unless sizes match and std is strictly positive.
void validate(const LatentGaussian& g);

/// Per-coordinate affine map between meters and the network's input/output
/// scale. Fitted on the train split; identity until then.
struct Standardizer {
  Vec3 mean = Vec3::Zero();
  Vec3 stdev = Vec3::Ones();

  Vec3 to_std(const Vec3& v) const { return (v - mean).cwiseQuotient(stdev); }
  Vec3 to_meters(const Vec3& v) const { return v.cwiseProduct(stdev) + mean; }
};

Standardizer fit_standardizer(const std::vector<const trajkit::DatasetEntry*>& entries);

/// Encoder maps [values || mask] (4*N flat) to (mu_z, sigma_z); the decoder
/// maps z (plus the same conditioning block unless `ci`) to a full-horizon
/// standardized trajectory (3*N flat). log_sigma_y is the learned
/// observation log-std per coordinate, in standardized space.
struct TvaeModel {
  neuralkit::MlpParams encoder;
  neuralkit::MlpParams decoder;
  Vec3 log_sigma_y = Vec3::Zero();
  bool ci = true;
  int latent_dim = 64;
  int hidden = 256;
  trajkit::TimeGrid grid;
  Standardizer norm;

  int conditioning_dim() const { return 4 * grid.steps; }
  int decoder_input_dim() const {
    return ci ? latent_dim : latent_dim + conditioning_dim();
  }
};

/// Two dense layers each, tanh hidden, Glorot init (encoder drawn first).
/// The encoder output layer keeps its first K outputs linear (mu) and runs
/// the rest through softplus (sigma). Standardizer starts as identity.
TvaeModel make_model(int latent_dim, int hidden, bool ci, const trajkit::TimeGrid& grid,
                     trajkit::Rng& rng);

/// Throws DataError when network shapes disagree with K/N_grid/ci.
void validate(const TvaeModel& m);

/// Flattened network conditioning block: standardized values times mask,
/// then the mask itself. Throws DataError on a grid size mismatch.
Eigen::VectorXd encoder_input(const TvaeModel& m, const trajkit::MaskedTrajectory& x);

LatentGaussian encode(const TvaeModel& m, const trajkit::MaskedTrajectory& x);

/// Decoder forward in standardized space, 3*N flat, step-major.
Eigen::VectorXd decode_std(const TvaeModel& m, const Eigen::VectorXd& z,
                           const trajkit::MaskedTrajectory& x,
                           neuralkit::ForwardCache* cache = nullptr);

/// Full-horizon prediction in meters, one entry per grid step.
std::vector<Vec3> decode(const TvaeModel& m, const Eigen::VectorXd& z,
                         const trajkit::MaskedTrajectory& x);

/// KL(q || p) for diagonal Gaussians, in nats:
///   sum_k ln(sigma_p/sigma_q) + (sigma_q^2 + (mu_q - mu_p)^2) / (2 sigma_p^2) - 1/2.
double gaussian_kl(const LatentGaussian& q, const LatentGaussian& p);

}  // namespace tvae
