#pragma once

#include <cstdint>
#include <vector>

#include "trajkit/types.hpp"
#include "tvae/model.hpp"

namespace tvae {

struct TrainConfig {
  int epochs = 2000;
  int batch = 64;
  int mc_samples = 1;        // Monte-Carlo draws per batch element
  double lr = 1e-3;
  double p_miss = 0.05;      // corruption: drop probability per observed step
  double p_outlier = 0.01;   // corruption: outlier probability per survivor
  int latent_dim = 64;
  int hidden = 256;
  bool ci = true;
  bool stop_prefix_kl = false;  // ablation: no KL gradient into the prefix encoding
  bool plain_sgd = false;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
  trajkit::TimeGrid grid;
};

void validate(const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  TvaeModel model;  // parameters of the best-validation epoch
  std::vector<EpochStats> history;
  double best_val_loss = 0.0;
  int best_epoch = 0;  // 0 when no epoch ran
};

/// Minimizes the negative ELBO over the train split with per-element
/// window sampling, a uniform cut point on {0..T_n}, prefix corruption and
/// reparametrized Monte-Carlo samples. 1 - val_fraction of the split trains,
/// the rest is validation; validation elements reuse fixed draws every epoch
/// so the curve is comparable across epochs. Deterministic given cfg.seed.
TrainResult train(const trajkit::Dataset& ds, const TrainConfig& cfg);

struct SearchRow {
  int latent_dim = 0;
  int hidden = 0;
  double val_loss = 0.0;
};

struct SearchResult {
  TrainConfig best_config;
  TrainResult best_run;
  std::vector<SearchRow> table;
};

/// Trains one model per (latent_dim, hidden) combination and ranks by best
/// validation loss; ties keep the earlier grid entry.
SearchResult hyper_search(const trajkit::Dataset& ds, const TrainConfig& base,
                          const std::vector<int>& latent_grid,
                          const std::vector<int>& hidden_grid);

std::vector<int> default_latent_grid();  // powers of two around the chosen K=64
std::vector<int> default_hidden_grid();

}  // namespace tvae
