#include "evalkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ballsim/physics.hpp"
#include "trajkit/errors.hpp"
#include "trajkit/ops.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/rng.hpp"
#include "tvae/predict.hpp"

namespace evalkit {

using trajkit::DataError;

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t prefix_hash(const trajkit::MaskedTrajectory& m) {
  std::uint64_t h = 14695981039346656037ULL;
  const std::int64_t cut = m.cut;
  h = fnv1a(&cut, sizeof cut, h);
  for (int i = 0; i < m.size(); ++i) {
    const auto j = static_cast<std::size_t>(i);
    h = fnv1a(&m.mask[j], 1, h);
    if (m.mask[j]) h = fnv1a(m.values[j].data(), 3 * sizeof(double), h);
  }
  return h;
}

/// Grid index one past the g-th observed step, or -1 when there are fewer
/// than g observed steps.
int cut_after_observed(const trajkit::MaskedTrajectory& m, int g) {
  int seen = 0;
  for (int i = 0; i < m.size(); ++i) {
    if (m.mask[static_cast<std::size_t>(i)] && ++seen == g) return i + 1;
  }
  return g == 0 ? 0 : -1;
}

struct GridTruth {
  trajkit::MaskedTrajectory observed;  // measured positions on the grid
  trajkit::MaskedTrajectory target;    // scoring target (truth when stored)
};

GridTruth align_entry(const trajkit::DatasetEntry& entry, const trajkit::TimeGrid& grid) {
  GridTruth out;
  out.observed = trajkit::resample_to_grid(entry.traj, grid);
  if (entry.has_truth()) {
    trajkit::Trajectory truth_traj = entry.traj;
    truth_traj.positions = entry.truth;
    out.target = trajkit::resample_to_grid(truth_traj, grid);
  } else {
    out.target = out.observed;
  }
  return out;
}

struct Running {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double stddev() const {
    if (n < 2) return 0.0;
    const double var = (sum_sq - sum * sum / n) / (n - 1);
    return std::sqrt(std::max(var, 0.0));
  }
};

ErrorCurve finalize(const std::map<int, Running>& acc, int skipped) {
  ErrorCurve curve;
  curve.skipped = skipped;
  for (const auto& [abscissa, w] : acc) {
    if (w.n == 0) continue;
    curve.abscissa.push_back(abscissa);
    curve.mean.push_back(w.mean());
    curve.stddev.push_back(w.stddev());
    curve.count.push_back(w.n);
  }
  return curve;
}

}  // namespace

Predictor physics_predictor(const ballsim::PhysicsParams& params, const trajkit::TimeGrid& grid,
                            int n, int k) {
  Predictor p;
  p.tag = "physics";
  p.predict = [params, grid, n, k](const trajkit::MaskedTrajectory& prefix) {
    const int stop = prefix.cut < 0 ? prefix.size() : prefix.cut;
    std::vector<int> observed;
    for (int i = 0; i < stop; ++i)
      if (prefix.mask[static_cast<std::size_t>(i)]) observed.push_back(i);
    const int total = static_cast<int>(observed.size());
    const auto z_of = [&](int j) {
      return prefix.values[static_cast<std::size_t>(observed[static_cast<std::size_t>(j)])].z();
    };

    // A bounce inside the prefix shows up as an interior height minimum near
    // the table followed by a visible rise; single flight arcs are concave
    // in z and bottom out only at the edges.
    int argmin = -1;
    double zmin = 1e30;
    for (int j = 0; j < total; ++j) {
      if (z_of(j) < zmin) {
        zmin = z_of(j);
        argmin = j;
      }
    }
    std::vector<int> arc;
    if (total > 0 && argmin > 0 && argmin < total - 1 &&
        zmin < params.table_height + 0.2 && z_of(total - 1) > zmin + 0.02) {
      if (total - 1 - argmin >= n) {
        arc.assign(observed.begin() + argmin + 1, observed.end());
      } else {
        arc.assign(observed.begin(), observed.begin() + argmin);
      }
    } else {
      arc = observed;
    }
    if (static_cast<int>(arc.size()) < k + 1) arc = observed;
    if (static_cast<int>(arc.size()) > 2 * n) arc.erase(arc.begin(), arc.end() - 2 * n);

    trajkit::MaskedTrajectory sub = prefix;
    std::fill(sub.mask.begin(), sub.mask.end(), std::uint8_t{0});
    for (auto& v : sub.values) v = Vec3::Zero();
    for (int i : arc) {
      sub.mask[static_cast<std::size_t>(i)] = 1;
      sub.values[static_cast<std::size_t>(i)] = prefix.values[static_cast<std::size_t>(i)];
    }

    // Integrate forward only. Steps before the anchor are filled with the
    // anchor position; scoring never reads them, and integrating drag
    // backwards from a late anchor diverges in finite time.
    const ballsim::BallState fitted = ballsim::fit_initial_state(sub, stop, k, grid);
    const int i0 = static_cast<int>(std::lround((fitted.time - grid.origin) / grid.dt));
    std::vector<Vec3> out(static_cast<std::size_t>(grid.steps), fitted.position);
    ballsim::BallState cur = fitted;
    for (int i = i0 + 1; i < grid.steps; ++i) {
      cur = ballsim::integrate_step(cur, grid.dt, params);
      if (!cur.position.allFinite()) throw trajkit::NumericError("diverged");
      out[static_cast<std::size_t>(i)] = cur.position;
    }
    return out;
  };
  return p;
}

Predictor tvae_predictor(const tvae::TvaeModel& m, int samples, std::uint64_t seed) {
  Predictor p;
  p.tag = "tvae";
  p.predict = [model = m, samples, seed](const trajkit::MaskedTrajectory& prefix) {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(seed, prefix_hash(prefix)));
    const tvae::PredictionEnsemble ensemble = tvae::predict_ensemble(model, prefix, samples, rng);
    if (samples < 2) return ensemble.samples.front();
    return tvae::ensemble_moments(ensemble).mean;
  };
  return p;
}

ErrorCurve error_vs_future_step(const Predictor& pred, const trajkit::Dataset& test, int given,
                                const trajkit::TimeGrid& grid) {
  if (given < 0) throw DataError("error_vs_future_step: given must be >= 0");
  const auto entries = test.split(trajkit::Split::Test);

  struct PerTraj {
    bool skipped = false;
    std::vector<std::pair<int, double>> errors;  // (future step, error)
  };
  std::vector<PerTraj> rows(entries.size());
  trajkit::parallel_for(entries.size(), [&](std::size_t t) {
    const GridTruth aligned = align_entry(*entries[t], grid);
    const int cut = cut_after_observed(aligned.observed, given);
    if (cut < 0) {
      rows[t].skipped = true;
      return;
    }
    const auto prediction = pred.predict(trajkit::make_prefix(aligned.observed, cut));
    for (int i = cut; i < grid.steps; ++i) {
      const auto j = static_cast<std::size_t>(i);
      if (!aligned.target.mask[j]) continue;
      const double err = (prediction[j] - aligned.target.values[j]).norm();
      rows[t].errors.emplace_back(i - cut + 1, err);
    }
  });

  std::map<int, Running> acc;
  int skipped = 0;
  for (const PerTraj& row : rows) {
    if (row.skipped) {
      ++skipped;
      continue;
    }
    for (const auto& [step, err] : row.errors) acc[step].add(err);
  }
  return finalize(acc, skipped);
}

ErrorCurve error_vs_given(const Predictor& pred, const trajkit::Dataset& test,
                          const std::vector<int>& given_values, const trajkit::TimeGrid& grid) {
  const auto entries = test.split(trajkit::Split::Test);
  struct Cell {
    bool valid = false;
    double mean_error = 0.0;
  };
  std::vector<std::vector<Cell>> rows(entries.size(),
                                      std::vector<Cell>(given_values.size()));
  trajkit::parallel_for(entries.size(), [&](std::size_t t) {
    const GridTruth aligned = align_entry(*entries[t], grid);
    for (std::size_t g = 0; g < given_values.size(); ++g) {
      const int cut = cut_after_observed(aligned.observed, given_values[g]);
      if (cut < 0) continue;
      const auto prediction = pred.predict(trajkit::make_prefix(aligned.observed, cut));
      double sum = 0.0;
      int n = 0;
      for (int i = cut; i < grid.steps; ++i) {
        const auto j = static_cast<std::size_t>(i);
        if (!aligned.target.mask[j]) continue;
        sum += (prediction[j] - aligned.target.values[j]).norm();
        ++n;
      }
      if (n == 0) continue;  // nothing left to predict
      rows[t][g] = {true, sum / n};
    }
  });

  ErrorCurve curve;
  for (std::size_t g = 0; g < given_values.size(); ++g) {
    Running w;
    int skipped_here = 0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t][g].valid)
        w.add(rows[t][g].mean_error);
      else
        ++skipped_here;
    }
    curve.skipped = std::max(curve.skipped, skipped_here);
    if (w.n == 0) continue;
    curve.abscissa.push_back(given_values[g]);
    curve.mean.push_back(w.mean());
    curve.stddev.push_back(w.stddev());
    curve.count.push_back(w.n);
  }
  return curve;
}

std::vector<int> default_given_values() {
  std::vector<int> given;
  for (int g = 5; g <= 200; g += 5) given.push_back(g);
  return given;
}

AblationResult ablation_ci(const trajkit::Dataset& ds, const tvae::TrainConfig& cfg, int given,
                           int samples) {
  AblationResult out;
  const auto curve_mean = [](const ErrorCurve& c) {
    double sum = 0.0;
    for (double m : c.mean) sum += m;
    return c.mean.empty() ? 0.0 : sum / static_cast<double>(c.mean.size());
  };
  tvae::TrainConfig ci_cfg = cfg;
  ci_cfg.ci = true;
  const tvae::TrainResult ci_run = tvae::train(ds, ci_cfg);
  out.ci = error_vs_future_step(tvae_predictor(ci_run.model, samples, cfg.seed), ds, given,
                                cfg.grid);
  out.ci_mean = curve_mean(out.ci);

  tvae::TrainConfig full_cfg = cfg;
  full_cfg.ci = false;
  const tvae::TrainResult full_run = tvae::train(ds, full_cfg);
  out.full = error_vs_future_step(tvae_predictor(full_run.model, samples, cfg.seed), ds, given,
                                  cfg.grid);
  out.full_mean = curve_mean(out.full);
  return out;
}

}  // namespace evalkit
