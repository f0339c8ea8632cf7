#include "tvae/predict.hpp"

#include <random>

#include "trajkit/errors.hpp"

namespace tvae {

using trajkit::DataError;

PredictionEnsemble predict_ensemble(const TvaeModel& m, const trajkit::MaskedTrajectory& prefix,
                                    int samples, trajkit::Rng& rng, bool mean_only) {
  if (samples < 1) throw DataError("predict: need at least one sample");
  const LatentGaussian q = encode(m, prefix);
  PredictionEnsemble out;
  out.cut = prefix.cut;
  out.latents.resize(m.latent_dim, samples);
  out.samples.reserve(static_cast<std::size_t>(samples));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int l = 0; l < samples; ++l) {
    Eigen::VectorXd z = q.mean;
    if (!mean_only)
      for (int k = 0; k < m.latent_dim; ++k) z[k] += q.std[k] * gauss(rng);
    out.latents.col(l) = z;
    out.samples.push_back(decode(m, z, prefix));
  }
  return out;
}

EnsembleMoments ensemble_moments(const PredictionEnsemble& e) {
  const std::size_t n_samples = e.samples.size();
  if (n_samples < 2) throw DataError("need >=2 samples");
  const std::size_t steps = e.samples.front().size();
  for (const auto& s : e.samples)
    if (s.size() != steps) throw DataError("ensemble: ragged samples");

  EnsembleMoments out;
  out.mean.assign(steps, Vec3::Zero());
  out.cov.assign(steps, Eigen::Matrix3d::Zero());
  for (const auto& s : e.samples)
    for (std::size_t i = 0; i < steps; ++i) out.mean[i] += s[i];
  for (std::size_t i = 0; i < steps; ++i) out.mean[i] /= static_cast<double>(n_samples);
  for (const auto& s : e.samples)
    for (std::size_t i = 0; i < steps; ++i) {
      const Vec3 d = s[i] - out.mean[i];
      out.cov[i] += d * d.transpose();
    }
  for (std::size_t i = 0; i < steps; ++i) out.cov[i] /= static_cast<double>(n_samples - 1);
  return out;
}

}  // namespace tvae
