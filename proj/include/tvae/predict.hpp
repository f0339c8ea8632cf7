#pragma once

#include <vector>

#include "tvae/model.hpp"

namespace tvae {

struct PredictionEnsemble {
  std::vector<std::vector<Vec3>> samples;  // L x grid.steps, meters
  int cut = 0;                             // prefix cut the samples condition on
  Eigen::MatrixXd latents;                 // K x L, the z draws used
};

/// One encode, L latent draws, L decodes. Deterministic given the rng
/// state. With mean_only the latent std is ignored and every draw is mu_z
/// (debug path for reproducible single trajectories).
PredictionEnsemble predict_ensemble(const TvaeModel& m, const trajkit::MaskedTrajectory& prefix,
                                    int samples, trajkit::Rng& rng, bool mean_only = false);

struct EnsembleMoments {
  std::vector<Vec3> mean;                // per grid step
  std::vector<Eigen::Matrix3d> cov;      // per grid step, unbiased
};

/// Per-step sample mean and unbiased covariance. Throws DataError
/// "need >=2 samples" below two samples.
EnsembleMoments ensemble_moments(const PredictionEnsemble& e);

}  // namespace tvae
