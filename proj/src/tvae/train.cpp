#include "tvae/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "neuralkit/adam.hpp"
#include "trajkit/errors.hpp"
#include "trajkit/ops.hpp"
#include "tvae/elbo.hpp"

namespace tvae {

using trajkit::DataError;

namespace {

// Derived-seed stream tags; every random decision in train() comes from one
// of these so the schedule is reproducible from cfg.seed alone.
enum : std::uint64_t { kSplitTag = 1, kInitTag = 2, kValTag = 3, kEpochTag = 4 };

Eigen::MatrixXd draw_eps(int rows, int cols, trajkit::Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd eps(rows, cols);
  for (int l = 0; l < cols; ++l)
    for (int k = 0; k < rows; ++k) eps(k, l) = gauss(rng);
  return eps;
}

struct ValItem {
  trajkit::MaskedTrajectory full;
  trajkit::MaskedTrajectory prefix;
  Eigen::MatrixXd eps;
};

}  // namespace

void validate(const TrainConfig& cfg) {
  const auto bad = [](const std::string& what) { throw DataError("train config: " + what); };
  if (cfg.epochs < 0) bad("epochs must be >= 0");
  if (cfg.batch < 1) bad("batch must be >= 1");
  if (cfg.mc_samples < 1) bad("mc_samples must be >= 1");
  if (!(cfg.lr > 0.0)) bad("lr must be positive");
  if (!(cfg.p_miss >= 0.0 && cfg.p_miss <= 1.0)) bad("p_miss must be in [0, 1]");
  if (!(cfg.p_outlier >= 0.0 && cfg.p_outlier <= 1.0)) bad("p_outlier must be in [0, 1]");
  if (cfg.latent_dim < 1) bad("latent_dim must be >= 1");
  if (cfg.hidden < 1) bad("hidden must be >= 1");
  if (!(cfg.val_fraction >= 0.0 && cfg.val_fraction < 1.0)) bad("val_fraction must be in [0, 1)");
  validate(cfg.grid);
}

TrainResult train(const trajkit::Dataset& ds, const TrainConfig& cfg) {
  validate(cfg);
  const std::vector<const trajkit::DatasetEntry*> pool = ds.split(trajkit::Split::Train);
  if (pool.empty()) throw DataError("train: empty train split");
  const auto n = static_cast<int>(pool.size());

  // Grid-aligned sources, one per trajectory, reused every epoch.
  std::vector<trajkit::MaskedTrajectory> sources;
  sources.reserve(pool.size());
  for (const trajkit::DatasetEntry* entry : pool)
    sources.push_back(trajkit::resample_to_grid(
        entry->traj, trajkit::natural_grid(entry->traj, cfg.grid.dt)));

  // Deterministic 90/10-style split of the pool into actual-train and
  // validation indices.
  std::vector<int> order(pool.size());
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(cfg.seed, kSplitTag));
    std::shuffle(order.begin(), order.end(), rng);
  }
  int n_val = static_cast<int>(std::lround(n * cfg.val_fraction));
  n_val = std::clamp(n_val, n >= 2 && cfg.val_fraction > 0.0 ? 1 : 0, n - 1);
  const std::vector<int> val_idx(order.end() - n_val, order.end());
  std::vector<int> fit_idx(order.begin(), order.end() - n_val);

  TrainResult result;
  {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(cfg.seed, kInitTag));
    result.model = make_model(cfg.latent_dim, cfg.hidden, cfg.ci, cfg.grid, rng);
  }
  result.model.norm = fit_standardizer(pool);
  const trajkit::Box3 domain_box = trajkit::Box3::bounding(pool, 0.1);

  // Validation items are frozen up front: same window, cut and noise draws
  // at every epoch, no corruption.
  std::vector<ValItem> val_items;
  val_items.reserve(val_idx.size());
  for (std::size_t v = 0; v < val_idx.size(); ++v) {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(cfg.seed, kValTag, v));
    ValItem item;
    item.full = trajkit::window_sample(sources[static_cast<std::size_t>(val_idx[v])],
                                       cfg.grid.steps, rng);
    const int t_n = item.full.observed_length();
    std::uniform_int_distribution<int> pick_cut(0, t_n);
    item.prefix = trajkit::make_prefix(item.full, pick_cut(rng));
    item.eps = draw_eps(cfg.latent_dim, cfg.mc_samples, rng);
    val_items.push_back(std::move(item));
  }
  const auto validation_loss = [&](const TvaeModel& model) {
    double sum = 0.0;
    for (const ValItem& item : val_items)
      sum += elbo_with_noise(model, item.full, item.prefix, item.eps, cfg.stop_prefix_kl).loss;
    return sum / static_cast<double>(val_items.size());
  };

  neuralkit::AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;
  adam_cfg.plain_sgd = cfg.plain_sgd;
  auto enc_opt = neuralkit::OptimizerState::init(result.model.encoder, adam_cfg);
  auto dec_opt = neuralkit::OptimizerState::init(result.model.decoder, adam_cfg);
  auto lsy_opt = neuralkit::VectorOptimizerState::init(3, adam_cfg);

  TvaeModel best = result.model;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;

  auto enc_grad = neuralkit::GradientBundle::zeros_like(result.model.encoder);
  auto dec_grad = neuralkit::GradientBundle::zeros_like(result.model.decoder);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(cfg.seed, kEpochTag,
                                                               static_cast<std::uint64_t>(epoch)));
    std::shuffle(fit_idx.begin(), fit_idx.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < fit_idx.size(); begin += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t end = std::min(begin + static_cast<std::size_t>(cfg.batch), fit_idx.size());
      const auto batch_n = static_cast<double>(end - begin);
      enc_grad.set_zero();
      dec_grad.set_zero();
      Eigen::VectorXd lsy_grad = Eigen::VectorXd::Zero(3);
      for (std::size_t j = begin; j < end; ++j) {
        const auto& source = sources[static_cast<std::size_t>(fit_idx[j])];
        const trajkit::MaskedTrajectory full =
            trajkit::window_sample(source, cfg.grid.steps, rng);
        std::uniform_int_distribution<int> pick_cut(0, full.observed_length());
        const trajkit::MaskedTrajectory prefix = trajkit::make_prefix(full, pick_cut(rng));
        const trajkit::MaskedTrajectory corrupted =
            trajkit::corrupt(prefix, cfg.p_miss, cfg.p_outlier, domain_box, rng);
        const Eigen::MatrixXd eps = draw_eps(cfg.latent_dim, cfg.mc_samples, rng);
        const ElboResult r =
            elbo_with_noise(result.model, full, corrupted, eps, cfg.stop_prefix_kl);
        loss_sum += r.loss;
        enc_grad.add_scaled(r.d_encoder, 1.0 / batch_n);
        dec_grad.add_scaled(r.d_decoder, 1.0 / batch_n);
        lsy_grad += r.d_log_sigma_y / batch_n;
      }
      neuralkit::adam_update(enc_opt, result.model.encoder, enc_grad);
      neuralkit::adam_update(dec_opt, result.model.decoder, dec_grad);
      Eigen::VectorXd lsy = result.model.log_sigma_y;
      neuralkit::adam_update(lsy_opt, lsy, lsy_grad, "log_sigma_y");
      result.model.log_sigma_y = lsy;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(fit_idx.size());
    stats.val_loss = val_items.empty() ? stats.train_loss : validation_loss(result.model);
    result.history.push_back(stats);
    if (stats.val_loss < best_val) {
      best_val = stats.val_loss;
      best_epoch = epoch;
      best = result.model;
    }
  }

  if (cfg.epochs > 0) result.model = best;
  result.best_val_loss = cfg.epochs > 0 ? best_val : 0.0;
  result.best_epoch = best_epoch;
  return result;
}

SearchResult hyper_search(const trajkit::Dataset& ds, const TrainConfig& base,
                          const std::vector<int>& latent_grid,
                          const std::vector<int>& hidden_grid) {
  if (latent_grid.empty() || hidden_grid.empty()) throw DataError("hyper_search: empty grid");
  SearchResult out;
  bool first = true;
  for (int k : latent_grid) {
    for (int hidden : hidden_grid) {
      TrainConfig cfg = base;
      cfg.latent_dim = k;
      cfg.hidden = hidden;
      TrainResult run = train(ds, cfg);
      out.table.push_back({k, hidden, run.best_val_loss});
      if (first || run.best_val_loss < out.best_run.best_val_loss) {
        out.best_config = cfg;
        out.best_run = std::move(run);
        first = false;
      }
    }
  }
  return out;
}

std::vector<int> default_latent_grid() { return {16, 32, 64, 128}; }
std::vector<int> default_hidden_grid() { return {64, 128, 256, 512}; }

}  // namespace tvae
