#pragma once

#include "tvae/model.hpp"

namespace tvae {

/// Negative conditional ELBO and its parameter gradients.
/// loss = KL(q(z|full) || q(z|prefix)) - mean_l sum_i log N(y_i; y_hat_i(z_l), Sigma_y)
/// with the reconstruction sum over observed steps at or past the cut, in
/// standardized space. kl and recon are the two terms separately.
struct ElboResult {
  double loss = 0.0;
  double kl = 0.0;
  double recon = 0.0;  // Monte-Carlo mean of the log-likelihood sum
  neuralkit::GradientBundle d_encoder;
  neuralkit::GradientBundle d_decoder;
  Vec3 d_log_sigma_y = Vec3::Zero();
};

/// Deterministic core: eps is the K x L matrix of standard-normal draws for
/// the reparametrized samples z_l = mu + sigma * eps_l. `prefix` is the
/// conditioning input (its cut is the cut point t; training passes the
/// corrupted prefix here while `full` stays clean). With stop_prefix_kl the
/// KL gradient does not flow into the prefix-side encoder pass.
ElboResult elbo_with_noise(const TvaeModel& m, const trajkit::MaskedTrajectory& full,
                           const trajkit::MaskedTrajectory& prefix,
                           const Eigen::MatrixXd& eps, bool stop_prefix_kl = false);

/// Convenience wrapper: prefix = make_prefix(full, t_cut), eps drawn from
/// rng column by column.
ElboResult elbo(const TvaeModel& m, const trajkit::MaskedTrajectory& full, int t_cut, int samples,
                trajkit::Rng& rng);

}  // namespace tvae
