#include "tvae/elbo.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "trajkit/errors.hpp"
#include "trajkit/ops.hpp"

namespace tvae {

using trajkit::DataError;
using trajkit::NumericError;

ElboResult elbo_with_noise(const TvaeModel& m, const trajkit::MaskedTrajectory& full,
                           const trajkit::MaskedTrajectory& prefix,
                           const Eigen::MatrixXd& eps, bool stop_prefix_kl) {
  const int K = m.latent_dim;
  const int N = m.grid.steps;
  const auto L = static_cast<int>(eps.cols());
  if (full.size() != N || prefix.size() != N)
    throw DataError("grid mismatch: elbo inputs must have " + std::to_string(N) + " steps");
  if (eps.rows() != K) throw DataError("elbo: eps must have K rows");
  if (L < 1) throw DataError("elbo: need at least one Monte-Carlo sample");
  const int t_cut = prefix.cut;
  if (t_cut < 0 || t_cut > N) throw DataError("elbo: cut out of range");

  ElboResult result;
  result.d_encoder = neuralkit::GradientBundle::zeros_like(m.encoder);
  result.d_decoder = neuralkit::GradientBundle::zeros_like(m.decoder);

  // Two passes through the shared encoder: posterior (full trajectory) and
  // conditional prior (prefix).
  const Eigen::VectorXd in_full = encoder_input(m, full);
  neuralkit::ForwardCache cache_q, cache_p;
  const Eigen::VectorXd out_q = neuralkit::mlp_forward(m.encoder, in_full, &cache_q);
  const Eigen::VectorXd out_p =
      neuralkit::mlp_forward(m.encoder, encoder_input(m, prefix), &cache_p);
  LatentGaussian q{out_q.head(K), out_q.tail(K)};
  LatentGaussian p{out_p.head(K), out_p.tail(K)};
  result.kl = gaussian_kl(q, p);

  Eigen::VectorXd d_mu_q = (q.mean - p.mean).cwiseQuotient(p.std.cwiseProduct(p.std));
  Eigen::VectorXd d_sg_q =
      q.std.cwiseQuotient(p.std.cwiseProduct(p.std)) - q.std.cwiseInverse();
  Eigen::VectorXd d_mu_p = -d_mu_q;
  Eigen::VectorXd d_sg_p =
      p.std.cwiseInverse() -
      (q.std.cwiseProduct(q.std) + (q.mean - p.mean).cwiseAbs2())
          .cwiseQuotient(p.std.cwiseProduct(p.std).cwiseProduct(p.std));

  // Standardized reconstruction target and noise scale.
  const Vec3 sigma_y = m.log_sigma_y.array().exp();
  const Vec3 inv_var = sigma_y.cwiseProduct(sigma_y).cwiseInverse();
  const double log_2pi = std::log(2.0 * std::numbers::pi);

  double recon_total = 0.0;
  neuralkit::ForwardCache cache_d;
  for (int l = 0; l < L; ++l) {
    const Eigen::VectorXd z = q.mean + q.std.cwiseProduct(eps.col(l));
    const Eigen::VectorXd out = decode_std(m, z, prefix, &cache_d);
    Eigen::VectorXd out_grad = Eigen::VectorXd::Zero(3 * N);
    double recon_l = 0.0;
    for (int i = t_cut; i < N; ++i) {
      if (!full.mask[static_cast<std::size_t>(i)]) continue;
      const Vec3 y = m.norm.to_std(full.values[static_cast<std::size_t>(i)]);
      for (int c = 0; c < 3; ++c) {
        const double r = y[c] - out[3 * i + c];
        recon_l += -0.5 * log_2pi - m.log_sigma_y[c] - 0.5 * r * r * inv_var[c];
        out_grad[3 * i + c] = -(1.0 / L) * r * inv_var[c];
        result.d_log_sigma_y[c] += (1.0 / L) * (1.0 - r * r * inv_var[c]);
      }
    }
    recon_total += recon_l;
    const Eigen::VectorXd in_grad =
        neuralkit::mlp_backward(m.decoder, cache_d, out_grad, result.d_decoder);
    d_mu_q += in_grad.head(K);
    d_sg_q += in_grad.head(K).cwiseProduct(eps.col(l));
  }
  result.recon = recon_total / L;
  result.loss = result.kl - result.recon;
  if (!std::isfinite(result.loss)) throw NumericError("elbo: non-finite loss");

  Eigen::VectorXd enc_grad(2 * K);
  enc_grad << d_mu_q, d_sg_q;
  neuralkit::mlp_backward(m.encoder, cache_q, enc_grad, result.d_encoder);
  if (!stop_prefix_kl) {
    enc_grad << d_mu_p, d_sg_p;
    neuralkit::mlp_backward(m.encoder, cache_p, enc_grad, result.d_encoder);
  }
  if (!result.d_encoder.all_finite() || !result.d_decoder.all_finite() ||
      !result.d_log_sigma_y.allFinite())
    throw NumericError("elbo: non-finite gradient");
  return result;
}

ElboResult elbo(const TvaeModel& m, const trajkit::MaskedTrajectory& full, int t_cut, int samples,
                trajkit::Rng& rng) {
  if (samples < 1) throw DataError("elbo: need at least one Monte-Carlo sample");
  const trajkit::MaskedTrajectory prefix = trajkit::make_prefix(full, t_cut);
  Eigen::MatrixXd eps(m.latent_dim, samples);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int l = 0; l < samples; ++l)
    for (int k = 0; k < m.latent_dim; ++k) eps(k, l) = gauss(rng);
  return elbo_with_noise(m, full, prefix, eps);
}

}  // namespace tvae
