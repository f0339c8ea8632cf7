// trajcast: ball-flight forecasting pipeline driver.
//
// Verbs: simulate, train, predict, evaluate, ablate, search, bench.
// Exit codes: 0 success, 1 usage, 2 bad data, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ballsim/fit.hpp"
#include "ballsim/physics.hpp"
#include "ballsim/synth.hpp"
#include "evalkit/curve_io.hpp"
#include "evalkit/eval.hpp"
#include "evalkit/latency.hpp"
#include "trajkit/dataset_io.hpp"
#include "trajkit/errors.hpp"
#include "trajkit/numfmt.hpp"
#include "trajkit/ops.hpp"
#include "tvae/model_io.hpp"
#include "tvae/predict.hpp"
#include "tvae/train.hpp"

namespace {

using trajkit::format_double;

struct GlobalOpts {
  std::uint64_t seed = 0;
};

void print_config(const std::string& verb,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
  std::cout << "config: verb = " << verb << "\n";
  for (const auto& [key, value] : kv) std::cout << "config: " << key << " = " << value << "\n";
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Physics and launch flags shared by simulate and the physics baseline in
// evaluate/bench.
struct PhysicsFlags {
  std::string config_path;
  ballsim::PhysicsParams params;

  void attach(CLI::App* sub) {
    sub->add_option("--physics-config", config_path,
                    "key = value file with physics constants (flags override it)");
    sub->add_option("--gravity", params.gravity, "gravity, m/s^2");
    sub->add_option("--drag-coeff", params.drag_coeff, "quadratic drag coefficient, 1/m");
    sub->add_option("--table-height", params.table_height, "table plane height, m");
    sub->add_option("--table-half-x", params.table_half_x, "table half extent along x, m");
    sub->add_option("--table-half-y", params.table_half_y, "table half extent along y, m");
    sub->add_option("--restitution-z", params.restitution_z, "vertical bounce restitution");
    sub->add_option("--tangential-retain", params.tangential_retain,
                    "tangential velocity kept at a bounce");
  }

  // Flags win over the config file: file values fill in only for flags the
  // user did not pass.
  ballsim::PhysicsParams resolve(const CLI::App* sub) const {
    ballsim::PhysicsParams out = params;
    if (!config_path.empty()) {
      const ballsim::PhysicsParams file = ballsim::read_physics_config(config_path);
      if (sub->count("--gravity") == 0) out.gravity = file.gravity;
      if (sub->count("--drag-coeff") == 0) out.drag_coeff = file.drag_coeff;
      if (sub->count("--table-height") == 0) out.table_height = file.table_height;
      if (sub->count("--table-half-x") == 0) out.table_half_x = file.table_half_x;
      if (sub->count("--table-half-y") == 0) out.table_half_y = file.table_half_y;
      if (sub->count("--restitution-z") == 0) out.restitution_z = file.restitution_z;
      if (sub->count("--tangential-retain") == 0)
        out.tangential_retain = file.tangential_retain;
    }
    ballsim::validate(out);
    return out;
  }

  std::vector<std::pair<std::string, std::string>> describe(
      const ballsim::PhysicsParams& p) const {
    return {{"gravity", format_double(p.gravity)},
            {"drag_coeff", format_double(p.drag_coeff)},
            {"table_height", format_double(p.table_height)},
            {"table_half_x", format_double(p.table_half_x)},
            {"table_half_y", format_double(p.table_half_y)},
            {"restitution_z", format_double(p.restitution_z)},
            {"tangential_retain", format_double(p.tangential_retain)}};
  }
};

struct TrainFlags {
  tvae::TrainConfig cfg;

  void attach(CLI::App* sub, bool with_epochs_default_2000 = true) {
    if (!with_epochs_default_2000) cfg.epochs = 200;
    sub->add_option("--k", cfg.latent_dim, "latent dimension");
    sub->add_option("--hidden", cfg.hidden, "hidden layer width");
    sub->add_flag("--ci,!--no-ci", cfg.ci, "conditionally independent decoder (default on)");
    sub->add_option("--epochs", cfg.epochs, "training epochs");
    sub->add_option("--batch", cfg.batch, "mini-batch size");
    sub->add_option("--lr", cfg.lr, "learning rate");
    sub->add_option("--mc-samples", cfg.mc_samples, "Monte-Carlo samples per batch element");
    sub->add_option("--p-miss", cfg.p_miss, "corruption: drop probability");
    sub->add_option("--p-outlier", cfg.p_outlier, "corruption: outlier probability");
    sub->add_option("--val-fraction", cfg.val_fraction, "validation share of the train split");
    sub->add_flag("--stop-prefix-kl", cfg.stop_prefix_kl,
                  "ablation: no KL gradient into the prefix encoding");
    sub->add_flag("--sgd", cfg.plain_sgd, "plain SGD instead of Adam");
  }

  std::vector<std::pair<std::string, std::string>> describe() const {
    return {{"k", std::to_string(cfg.latent_dim)},
            {"hidden", std::to_string(cfg.hidden)},
            {"ci", bool_str(cfg.ci)},
            {"epochs", std::to_string(cfg.epochs)},
            {"batch", std::to_string(cfg.batch)},
            {"lr", format_double(cfg.lr)},
            {"mc_samples", std::to_string(cfg.mc_samples)},
            {"p_miss", format_double(cfg.p_miss)},
            {"p_outlier", format_double(cfg.p_outlier)},
            {"val_fraction", format_double(cfg.val_fraction)},
            {"stop_prefix_kl", bool_str(cfg.stop_prefix_kl)},
            {"sgd", bool_str(cfg.plain_sgd)}};
  }
};

void write_history(const std::string& path, const std::vector<tvae::EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw trajkit::DataError(path + ": cannot open for writing");
  out << "epoch,train_loss,val_loss\n";
  for (const tvae::EpochStats& row : history)
    out << row.epoch << ',' << format_double(row.train_loss) << ','
        << format_double(row.val_loss) << "\n";
  if (!out) throw trajkit::DataError(path + ": write failed");
}

// Grid index one past the g-th observed step; g < 0 means everything.
int resolve_cut(const trajkit::MaskedTrajectory& m, int given) {
  if (given < 0) return m.observed_length();
  int seen = 0;
  for (int i = 0; i < m.size(); ++i)
    if (m.mask[static_cast<std::size_t>(i)] && ++seen == given) return i + 1;
  if (given == 0) return 0;
  return -1;
}

int cmd_simulate(const GlobalOpts& global, const CLI::App* sub, const PhysicsFlags& physics,
                 const ballsim::LaunchDistribution& launch, int count, double noise_std,
                 double test_fraction, const std::string& out_path) {
  const ballsim::PhysicsParams params = physics.resolve(sub);
  auto kv = physics.describe(params);
  kv.insert(kv.begin(), {{"count", std::to_string(count)},
                         {"noise_std", format_double(noise_std)},
                         {"test_fraction", format_double(test_fraction)},
                         {"seed", std::to_string(global.seed)},
                         {"out", out_path}});
  print_config("simulate", kv);

  const trajkit::TimeGrid grid;
  const trajkit::Dataset ds =
      ballsim::synth_dataset(count, launch, grid, params, noise_std, global.seed, test_fraction);
  trajkit::write_dataset(out_path, ds);
  std::cout << "wrote " << ds.size() << " trajectories (" << ds.count(trajkit::Split::Train)
            << " train, " << ds.count(trajkit::Split::Test) << " test) to " << out_path << "\n";
  return 0;
}

int cmd_train(const GlobalOpts& global, TrainFlags& flags, const std::string& data_path,
              const std::string& out_path) {
  flags.cfg.seed = global.seed;
  auto kv = flags.describe();
  kv.insert(kv.begin(), {{"data", data_path}, {"out", out_path},
                         {"seed", std::to_string(global.seed)}});
  print_config("train", kv);

  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  const tvae::TrainResult result = tvae::train(ds, flags.cfg);
  tvae::save_model(out_path, result.model);
  write_history(out_path + ".history.csv", result.history);
  std::cout << "model written to " << out_path << "\n";
  std::cout << "history written to " << out_path << ".history.csv\n";
  if (!result.history.empty())
    std::cout << "best validation loss " << format_double(result.best_val_loss) << " at epoch "
              << result.best_epoch << "\n";
  return 0;
}

int cmd_predict(const GlobalOpts& global, const std::string& model_path,
                const std::string& data_path, const std::string& out_path, int samples, int given,
                bool moments, bool mean_only) {
  print_config("predict", {{"model", model_path},
                           {"data", data_path},
                           {"out", out_path},
                           {"samples", std::to_string(samples)},
                           {"given", std::to_string(given)},
                           {"moments", bool_str(moments)},
                           {"mean_only", bool_str(mean_only)},
                           {"seed", std::to_string(global.seed)}});
  const tvae::TvaeModel model = tvae::load_model(model_path);
  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  if (moments && samples < 2)
    throw trajkit::DataError("predict: --moments needs --samples >= 2");

  std::ofstream out(out_path);
  if (!out) throw trajkit::DataError(out_path + ": cannot open for writing");
  for (const trajkit::DatasetEntry& entry : ds.entries) {
    const trajkit::MaskedTrajectory on_grid = trajkit::resample_to_grid(entry.traj, model.grid);
    if (on_grid.observed_count() == 0)
      throw trajkit::DataError("grid mismatch: no samples of trajectory " +
                               std::to_string(entry.traj.id) + " land on the model grid");
    const int cut = resolve_cut(on_grid, given);
    if (cut < 0)
      throw trajkit::DataError("trajectory " + std::to_string(entry.traj.id) + " has fewer than " +
                               std::to_string(given) + " observed samples");
    const trajkit::MaskedTrajectory prefix = trajkit::make_prefix(on_grid, cut);
    trajkit::Rng rng = trajkit::make_rng(
        trajkit::derived_seed(global.seed, static_cast<std::uint64_t>(entry.traj.id)));
    const tvae::PredictionEnsemble ensemble =
        tvae::predict_ensemble(model, prefix, samples, rng, mean_only);

    const auto times_json = [&] {
      nlohmann::json t = nlohmann::json::array();
      for (int i = 0; i < model.grid.steps; ++i) t.push_back(model.grid.time(i));
      return t;
    }();
    const auto positions_json = [](const std::vector<trajkit::Vec3>& rows) {
      nlohmann::json pos = nlohmann::json::array();
      for (const trajkit::Vec3& v : rows) pos.push_back({v[0], v[1], v[2]});
      return pos;
    };
    if (moments) {
      const tvae::EnsembleMoments mom = tvae::ensemble_moments(ensemble);
      nlohmann::json rec;
      rec["id"] = entry.traj.id;
      rec["t"] = times_json;
      rec["pos"] = positions_json(mom.mean);
      nlohmann::json cov = nlohmann::json::array();
      for (const Eigen::Matrix3d& c : mom.cov) {
        nlohmann::json flat = nlohmann::json::array();
        for (int r = 0; r < 3; ++r)
          for (int col = 0; col < 3; ++col) flat.push_back(c(r, col));
        cov.push_back(flat);
      }
      rec["cov"] = cov;
      out << rec.dump() << "\n";
    } else {
      for (int l = 0; l < samples; ++l) {
        nlohmann::json rec;
        // Sample records need unique ids: source id * samples + sample index.
        rec["id"] = entry.traj.id * samples + l;
        rec["t"] = times_json;
        rec["pos"] = positions_json(ensemble.samples[static_cast<std::size_t>(l)]);
        out << rec.dump() << "\n";
      }
    }
  }
  if (!out) throw trajkit::DataError(out_path + ": write failed");
  std::cout << "predictions written to " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const GlobalOpts& global, const CLI::App* sub, const PhysicsFlags& physics,
                 const std::string& model_path, const std::string& data_path,
                 const std::string& out_prefix, int samples, int given,
                 std::vector<int> given_list) {
  const ballsim::PhysicsParams params = physics.resolve(sub);
  if (given_list.empty()) given_list = evalkit::default_given_values();
  print_config("evaluate", {{"model", model_path.empty() ? "(none)" : model_path},
                            {"data", data_path},
                            {"out", out_prefix},
                            {"samples", std::to_string(samples)},
                            {"given", std::to_string(given)},
                            {"seed", std::to_string(global.seed)}});
  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  const trajkit::TimeGrid grid;

  const auto report = [&](const std::string& name, const evalkit::ErrorCurve& curve) {
    double mean = 0.0;
    for (double m : curve.mean) mean += m;
    if (!curve.mean.empty()) mean /= static_cast<double>(curve.mean.size());
    std::cout << name << ": " << curve.size() << " points, mean over points "
              << format_double(mean) << " m, skipped " << curve.skipped << "\n";
  };

  const evalkit::Predictor physics_pred = evalkit::physics_predictor(params, grid);
  const evalkit::ErrorCurve phys_given =
      evalkit::error_vs_given(physics_pred, ds, given_list, grid);
  evalkit::write_curve(out_prefix + ".physics_given.csv", phys_given);
  report("physics error vs given", phys_given);
  const evalkit::ErrorCurve phys_step =
      evalkit::error_vs_future_step(physics_pred, ds, given, grid);
  evalkit::write_curve(out_prefix + ".physics_step.csv", phys_step);
  report("physics error vs future step", phys_step);

  if (!model_path.empty()) {
    const tvae::TvaeModel model = tvae::load_model(model_path);
    const evalkit::Predictor tvae_pred = evalkit::tvae_predictor(model, samples, global.seed);
    const evalkit::ErrorCurve tvae_given =
        evalkit::error_vs_given(tvae_pred, ds, given_list, model.grid);
    evalkit::write_curve(out_prefix + ".tvae_given.csv", tvae_given);
    report("tvae error vs given", tvae_given);
    const evalkit::ErrorCurve tvae_step =
        evalkit::error_vs_future_step(tvae_pred, ds, given, model.grid);
    evalkit::write_curve(out_prefix + ".tvae_step.csv", tvae_step);
    report("tvae error vs future step", tvae_step);
  }
  std::cout << "curves written with prefix " << out_prefix << "\n";
  return 0;
}

int cmd_ablate(const GlobalOpts& global, TrainFlags& flags, const std::string& data_path,
               const std::string& out_prefix, int given, int samples) {
  flags.cfg.seed = global.seed;
  auto kv = flags.describe();
  kv.insert(kv.begin(), {{"data", data_path}, {"out", out_prefix},
                         {"given", std::to_string(given)},
                         {"samples", std::to_string(samples)},
                         {"seed", std::to_string(global.seed)}});
  print_config("ablate", kv);

  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  const evalkit::AblationResult result = evalkit::ablation_ci(ds, flags.cfg, given, samples);
  evalkit::write_curve(out_prefix + ".ci.csv", result.ci);
  evalkit::write_curve(out_prefix + ".full.csv", result.full);
  std::cout << "ci mean-over-steps " << format_double(result.ci_mean) << " m\n";
  std::cout << "full mean-over-steps " << format_double(result.full_mean) << " m\n";
  // The CI decoder showing the smaller generalization error is the expected
  // outcome, but it is data dependent; log it, never assert it.
  std::cout << (result.ci_mean <= result.full_mean
                    ? "ci decoder generalizes better on this run\n"
                    : "full decoder generalizes better on this run (unexpected but possible)\n");
  return 0;
}

int cmd_search(const GlobalOpts& global, TrainFlags& flags, const std::string& data_path,
               const std::string& out_path, const std::string& save_best,
               std::vector<int> k_grid, std::vector<int> hidden_grid) {
  flags.cfg.seed = global.seed;
  if (k_grid.empty()) k_grid = tvae::default_latent_grid();
  if (hidden_grid.empty()) hidden_grid = tvae::default_hidden_grid();
  auto kv = flags.describe();
  kv.insert(kv.begin(), {{"data", data_path}, {"out", out_path},
                         {"seed", std::to_string(global.seed)}});
  print_config("search", kv);

  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  const tvae::SearchResult result = tvae::hyper_search(ds, flags.cfg, k_grid, hidden_grid);
  std::ofstream out(out_path);
  if (!out) throw trajkit::DataError(out_path + ": cannot open for writing");
  out << "k,hidden,val_loss\n";
  for (const tvae::SearchRow& row : result.table)
    out << row.latent_dim << ',' << row.hidden << ',' << format_double(row.val_loss) << "\n";
  if (!out) throw trajkit::DataError(out_path + ": write failed");
  std::cout << "table written to " << out_path << "\n";
  std::cout << "best: k = " << result.best_config.latent_dim
            << ", hidden = " << result.best_config.hidden << ", val loss "
            << format_double(result.best_run.best_val_loss) << "\n";
  if (!save_best.empty()) {
    tvae::save_model(save_best, result.best_run.model);
    std::cout << "best model written to " << save_best << "\n";
  }
  return 0;
}

int cmd_bench(const GlobalOpts& global, const CLI::App* sub, const PhysicsFlags& physics,
              const std::string& model_path, const std::string& data_path, int samples, int given,
              int reps) {
  print_config("bench", {{"model", model_path.empty() ? "(physics)" : model_path},
                         {"data", data_path},
                         {"samples", std::to_string(samples)},
                         {"given", std::to_string(given)},
                         {"reps", std::to_string(reps)},
                         {"seed", std::to_string(global.seed)}});
  const trajkit::Dataset ds = trajkit::read_dataset(data_path);
  const trajkit::TimeGrid grid;
  const auto tests = ds.split(trajkit::Split::Test);
  const trajkit::DatasetEntry& entry = tests.empty() ? ds.entries.front() : *tests.front();
  const trajkit::MaskedTrajectory on_grid = trajkit::resample_to_grid(entry.traj, grid);
  const int cut = resolve_cut(on_grid, given);
  if (cut < 0)
    throw trajkit::DataError("bench trajectory has fewer than " + std::to_string(given) +
                             " observed samples");
  const trajkit::MaskedTrajectory prefix = trajkit::make_prefix(on_grid, cut);

  evalkit::LatencyReport report;
  if (!model_path.empty()) {
    const tvae::TvaeModel model = tvae::load_model(model_path);
    report = evalkit::latency_bench(evalkit::tvae_predictor(model, samples, global.seed), prefix,
                                    samples, reps);
  } else {
    const ballsim::PhysicsParams params = physics.resolve(sub);
    report =
        evalkit::latency_bench(evalkit::physics_predictor(params, grid), prefix, samples, reps);
  }
  std::cout << "latency median " << format_double(report.median_ms) << " ms, p95 "
            << format_double(report.p95_ms) << " ms, max " << format_double(report.max_ms)
            << " ms over " << report.reps << " reps (ensemble " << report.ensemble << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajcast: table-tennis ball flight forecasting (TVAE + physics baseline)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value config file merged under flags ([verb] sections)");

  GlobalOpts global;
  app.add_option("--seed", global.seed, "seed for all randomness")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->fallthrough();
  PhysicsFlags sim_physics;
  sim_physics.attach(sim);
  ballsim::LaunchDistribution launch;
  int sim_count = 2200;
  double sim_noise = 0.01;
  double sim_test_fraction = 1.0 / 11.0;
  std::string sim_out;
  sim->add_option("--count", sim_count, "total trajectories (train + test)");
  sim->add_option("--noise-std", sim_noise, "sensor noise std per coordinate, m");
  sim->add_option("--test-fraction", sim_test_fraction, "share of trajectories in the test split");
  sim->add_option("--out", sim_out, "output dataset file")->required();
  sim->add_option("--speed-min", launch.speed_min, "launch speed lower bound, m/s");
  sim->add_option("--speed-max", launch.speed_max, "launch speed upper bound, m/s");
  sim->add_option("--elevation-min", launch.elevation_min_deg, "launch elevation minimum, deg");
  sim->add_option("--elevation-max", launch.elevation_max_deg, "launch elevation maximum, deg");
  sim->add_option("--azimuth-half", launch.azimuth_half_deg, "launch azimuth half angle, deg");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->fallthrough();
  TrainFlags train_flags;
  train_flags.attach(train_cmd);
  std::string train_data, train_out;
  train_cmd->add_option("--data", train_data, "training dataset")->required();
  train_cmd->add_option("--out", train_out, "model output path")->required();

  // predict
  auto* pred = app.add_subcommand("predict", "forecast from observed prefixes");
  pred->fallthrough();
  std::string pred_model, pred_data, pred_out;
  int pred_samples = 30;
  int pred_given = -1;
  bool pred_moments = false, pred_mean_only = false;
  pred->add_option("--model", pred_model, "model file")->required();
  pred->add_option("--data", pred_data, "dataset with the prefixes")->required();
  pred->add_option("--out", pred_out, "output file")->required();
  pred->add_option("--samples", pred_samples, "ensemble size");
  pred->add_option("--given", pred_given, "observed samples per prefix (-1: all)");
  pred->add_flag("--moments", pred_moments, "write mean + per-step covariance instead of samples");
  pred->add_flag("--mean-only", pred_mean_only, "ignore latent std (deterministic debug path)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "error curves on the test split");
  eval->fallthrough();
  PhysicsFlags eval_physics;
  eval_physics.attach(eval);
  std::string eval_model, eval_data, eval_out;
  int eval_samples = 30, eval_given = 30;
  std::vector<int> eval_given_list;
  eval->add_option("--model", eval_model, "model file (omit for physics baseline only)");
  eval->add_option("--data", eval_data, "dataset")->required();
  eval->add_option("--out", eval_out, "output path prefix")->required();
  eval->add_option("--samples", eval_samples, "ensemble size");
  eval->add_option("--given", eval_given, "prefix length for the per-step curve");
  eval->add_option("--given-list", eval_given_list, "abscissas for the error-vs-given curve");

  // ablate
  auto* abl = app.add_subcommand("ablate", "train twin ci/full models and compare");
  abl->fallthrough();
  TrainFlags abl_flags;
  abl_flags.attach(abl, false);
  std::string abl_data, abl_out;
  int abl_given = 30, abl_samples = 30;
  abl->add_option("--data", abl_data, "dataset")->required();
  abl->add_option("--out", abl_out, "output path prefix")->required();
  abl->add_option("--given", abl_given, "prefix length for the per-step curves");
  abl->add_option("--samples", abl_samples, "ensemble size");

  // search
  auto* search = app.add_subcommand("search", "hyper-parameter grid search");
  search->fallthrough();
  TrainFlags search_flags;
  search_flags.attach(search, false);
  std::string search_data, search_out, search_save_best;
  std::vector<int> search_k_grid, search_hidden_grid;
  search->add_option("--data", search_data, "dataset")->required();
  search->add_option("--out", search_out, "table output file")->required();
  search->add_option("--k-grid", search_k_grid, "latent sizes to try (default powers of two)");
  search->add_option("--hidden-grid", search_hidden_grid, "hidden widths to try");
  search->add_option("--save-best", search_save_best, "write the best model here");

  // bench
  auto* bench = app.add_subcommand("bench", "prediction latency");
  bench->fallthrough();
  PhysicsFlags bench_physics;
  bench_physics.attach(bench);
  std::string bench_model, bench_data;
  int bench_samples = 30, bench_given = 30, bench_reps = 100;
  bench->add_option("--model", bench_model, "model file (omit to bench the physics baseline)");
  bench->add_option("--data", bench_data, "dataset supplying the benchmark prefix")->required();
  bench->add_option("--samples", bench_samples, "ensemble size");
  bench->add_option("--given", bench_given, "observed samples in the prefix");
  bench->add_option("--reps", bench_reps, "timed repetitions (>= 30)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(global, sim, sim_physics, launch, sim_count, sim_noise,
                          sim_test_fraction, sim_out);
    if (train_cmd->parsed()) return cmd_train(global, train_flags, train_data, train_out);
    if (pred->parsed())
      return cmd_predict(global, pred_model, pred_data, pred_out, pred_samples, pred_given,
                         pred_moments, pred_mean_only);
    if (eval->parsed())
      return cmd_evaluate(global, eval, eval_physics, eval_model, eval_data, eval_out,
                          eval_samples, eval_given, eval_given_list);
    if (abl->parsed())
      return cmd_ablate(global, abl_flags, abl_data, abl_out, abl_given, abl_samples);
    if (search->parsed())
      return cmd_search(global, search_flags, search_data, search_out, search_save_best,
                        search_k_grid, search_hidden_grid);
    if (bench->parsed())
      return cmd_bench(global, bench, bench_physics, bench_model, bench_data, bench_samples,
                       bench_given, bench_reps);
    std::cerr << app.help();
    return 1;
  } catch (const trajkit::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const trajkit::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
