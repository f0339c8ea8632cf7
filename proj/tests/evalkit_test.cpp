#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "ballsim/synth.hpp"
#include "evalkit/curve_io.hpp"
#include "evalkit/eval.hpp"
#include "evalkit/latency.hpp"
#include "trajkit/errors.hpp"
#include "trajkit/ops.hpp"
#include "trajkit/rng.hpp"
#include "tvae/train.hpp"

using namespace evalkit;
using trajkit::DataError;
using trajkit::TimeGrid;
using trajkit::Vec3;

namespace {

// Test-split dataset whose samples sit exactly on the grid, truth attached.
trajkit::Dataset line_dataset(int count, const TimeGrid& grid, int length, double noise) {
  trajkit::Rng rng = trajkit::make_rng(77);
  std::normal_distribution<double> gauss(0.0, noise);
  trajkit::Dataset ds;
  for (int id = 0; id < count; ++id) {
    trajkit::DatasetEntry e;
    e.traj.id = id;
    e.split = trajkit::Split::Test;
    for (int i = 0; i < length; ++i) {
      const double t = grid.time(i);
      const Vec3 truth(1.0 * id + t, -t, 2.0 * t);
      e.traj.times.push_back(t);
      e.truth.push_back(truth);
      e.traj.positions.push_back(truth + Vec3(gauss(rng), gauss(rng), gauss(rng)));
    }
    ds.entries.push_back(std::move(e));
  }
  return ds;
}

// Predictor that reads the hidden line parameters back out of the prefix.
Predictor line_oracle(const TimeGrid& grid) {
  Predictor p;
  p.tag = "oracle";
  p.predict = [grid](const trajkit::MaskedTrajectory& prefix) {
    double id = 0.0;
    for (int i = 0; i < prefix.size(); ++i)
      if (prefix.mask[static_cast<std::size_t>(i)]) {
        id = prefix.values[static_cast<std::size_t>(i)][0] - grid.time(i);
        break;
      }
    std::vector<Vec3> out(static_cast<std::size_t>(grid.steps));
    for (int i = 0; i < grid.steps; ++i) {
      const double t = grid.time(i);
      out[static_cast<std::size_t>(i)] = Vec3(id + t, -t, 2.0 * t);
    }
    return out;
  };
  return p;
}

Predictor constant_offset(const TimeGrid& grid, const Predictor& base, const Vec3& offset) {
  Predictor p;
  p.tag = "offset";
  p.predict = [base, offset, grid](const trajkit::MaskedTrajectory& prefix) {
    std::vector<Vec3> out = base.predict(prefix);
    for (Vec3& v : out) v += offset;
    return out;
  };
  return p;
}

}  // namespace

TEST_CASE("an oracle predictor scores zero against noise-free truth") {
  TimeGrid grid;
  grid.steps = 40;
  const trajkit::Dataset ds = line_dataset(6, grid, 40, 0.0);
  const ErrorCurve curve = error_vs_future_step(line_oracle(grid), ds, 10, grid);
  REQUIRE(curve.size() == 30);  // future steps 1..30
  CHECK(curve.skipped == 0);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve.abscissa[i] == static_cast<double>(i + 1));
    CHECK(curve.mean[i] < 1e-12);
    CHECK(curve.count[i] == 6);
  }
}

TEST_CASE("errors are scored against truth, not the noisy measurements") {
  TimeGrid grid;
  grid.steps = 40;
  const trajkit::Dataset ds = line_dataset(6, grid, 40, 0.05);
  // oracle reconstructs truth from the first noisy sample, so feed it a
  // noise-free prefix via the offset trick: score a known constant offset
  const Vec3 offset(0.3, 0.0, -0.4);
  const ErrorCurve curve =
      error_vs_future_step(constant_offset(grid, line_oracle(grid), offset), ds, 10, grid);
  // prediction = truth + offset + (oracle id error from one noisy sample)
  // the id error is ~noise scale; the offset norm dominates
  for (std::size_t i = 0; i < curve.size(); ++i)
    CHECK(curve.mean[i] == doctest::Approx(offset.norm()).epsilon(0.25));
}

TEST_CASE("too-short trajectories are skipped and counted") {
  TimeGrid grid;
  grid.steps = 40;
  trajkit::Dataset ds = line_dataset(4, grid, 40, 0.0);
  ds.entries[0].traj.times.resize(5);  // only 5 observations
  ds.entries[0].traj.positions.resize(5);
  ds.entries[0].truth.resize(5);
  const ErrorCurve curve = error_vs_future_step(line_oracle(grid), ds, 10, grid);
  CHECK(curve.skipped == 1);
  for (std::size_t i = 0; i < curve.size(); ++i) CHECK(curve.count[i] == 3);
}

TEST_CASE("given zero means predicting from nothing") {
  TimeGrid grid;
  grid.steps = 20;
  const trajkit::Dataset ds = line_dataset(3, grid, 20, 0.0);
  bool saw_empty_prefix = false;
  Predictor probe;
  probe.tag = "probe";
  probe.predict = [&](const trajkit::MaskedTrajectory& prefix) {
    saw_empty_prefix = prefix.observed_count() == 0 && prefix.cut == 0;
    return std::vector<Vec3>(static_cast<std::size_t>(grid.steps), Vec3::Zero());
  };
  const ErrorCurve curve = error_vs_future_step(probe, ds, 0, grid);
  CHECK(saw_empty_prefix);
  CHECK(curve.size() == 20);  // every step is a future step
}

TEST_CASE("error_vs_given averages per-trajectory future error") {
  TimeGrid grid;
  grid.steps = 30;
  const trajkit::Dataset ds = line_dataset(5, grid, 30, 0.0);
  const Vec3 offset(0.0, 0.12, 0.0);
  const ErrorCurve curve = error_vs_given(constant_offset(grid, line_oracle(grid), offset), ds,
                                          {5, 10, 20, 50}, grid);
  // 50 observations are more than any trajectory has: that column vanishes
  REQUIRE(curve.size() == 3);
  CHECK(curve.abscissa[0] == 5.0);
  CHECK(curve.abscissa[2] == 20.0);
  CHECK(curve.skipped == 5);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(curve.mean[i] == doctest::Approx(0.12).epsilon(1e-9));
    CHECK(curve.count[i] == 5);
  }
}

TEST_CASE("default given values sweep 5 to 200") {
  const std::vector<int> given = default_given_values();
  REQUIRE(given.size() == 40);
  CHECK(given.front() == 5);
  CHECK(given.back() == 200);
  CHECK(given[1] - given[0] == 5);
}

TEST_CASE("physics predictor wires the baseline end to end") {
  ballsim::PhysicsParams params;
  TimeGrid grid;
  ballsim::LaunchDistribution launch;
  const trajkit::Dataset ds = ballsim::synth_dataset(33, launch, grid, params, 0.0, 21);
  const ErrorCurve curve = error_vs_future_step(physics_predictor(params, grid), ds, 30, grid);
  REQUIRE(curve.size() > 50);
  double worst = 0.0;
  for (double m : curve.mean) worst = std::max(worst, m);
  // Noise-free data and exact physics: what remains is the bias of the
  // degree-2 launch fit against drag curvature, a few cm at the horizon end.
  CHECK(worst < 5e-2);
}

TEST_CASE("tvae predictor is deterministic across calls and order") {
  TimeGrid grid;
  grid.steps = 12;
  grid.dt = 1.0 / 180.0;
  trajkit::Rng rng = trajkit::make_rng(5);
  tvae::TvaeModel model = tvae::make_model(3, 8, true, grid, rng);
  const Predictor pred = tvae_predictor(model, 5, 123);

  trajkit::MaskedTrajectory a = trajkit::MaskedTrajectory::zeros(grid.steps);
  a.cut = 6;
  for (int i = 0; i < 6; ++i) {
    a.mask[static_cast<std::size_t>(i)] = 1;
    a.values[static_cast<std::size_t>(i)] = Vec3(0.1 * i, 0.0, 1.0);
  }
  trajkit::MaskedTrajectory b = a;
  b.values[2][1] = 0.5;  // different content, different stream

  const std::vector<Vec3> a1 = pred.predict(a);
  const std::vector<Vec3> b1 = pred.predict(b);
  const std::vector<Vec3> a2 = pred.predict(a);
  for (std::size_t i = 0; i < a1.size(); ++i) CHECK(a1[i] == a2[i]);
  double diff = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i) diff = std::max(diff, (a1[i] - b1[i]).norm());
  CHECK(diff > 0.0);
}

TEST_CASE("curve files round-trip exactly") {
  ErrorCurve curve;
  curve.abscissa = {1.0, 2.0, 5.0};
  curve.mean = {0.1, 0.25, 1.0 / 3.0};
  curve.stddev = {0.01, 0.0, 0.5};
  curve.count = {10, 10, 7};
  curve.skipped = 2;
  std::ostringstream out;
  write_curve(out, curve);
  std::istringstream in(out.str());
  const ErrorCurve back = read_curve(in, "mem");
  CHECK(back.abscissa == curve.abscissa);
  CHECK(back.mean == curve.mean);
  CHECK(back.stddev == curve.stddev);
  CHECK(back.count == curve.count);
  CHECK(back.skipped == curve.skipped);

  const std::string path = "evalkit_test_curve.csv";
  write_curve(path, curve);
  const ErrorCurve from_file = read_curve(path);
  CHECK(from_file.mean == curve.mean);
  std::remove(path.c_str());
}

TEST_CASE("curve reader rejects malformed rows") {
  std::istringstream in("abscissa,mean,std,n\n1,2,3\n");
  CHECK_THROWS_AS(read_curve(in, "bad.csv"), DataError);
  std::istringstream in2("wrong,header\n");
  CHECK_THROWS_AS(read_curve(in2, "bad2.csv"), DataError);
}

TEST_CASE("latency bench reports ordered quantiles") {
  TimeGrid grid;
  grid.steps = 8;
  Predictor instant;
  instant.tag = "instant";
  instant.predict = [&](const trajkit::MaskedTrajectory&) {
    return std::vector<Vec3>(8, Vec3::Zero());
  };
  const trajkit::MaskedTrajectory prefix = trajkit::MaskedTrajectory::zeros(8);
  const LatencyReport report = latency_bench(instant, prefix, 4, 50);
  CHECK(report.reps == 50);
  CHECK(report.ensemble == 4);
  CHECK(report.median_ms >= 0.0);
  CHECK(report.median_ms <= report.p95_ms);
  CHECK(report.p95_ms <= report.max_ms);
  CHECK(report.max_ms < 1000.0);
  CHECK_THROWS_AS(latency_bench(instant, prefix, 4, 10), DataError);
}

TEST_CASE("ablation trains both variants and fills the curves") {
  ballsim::PhysicsParams params;
  TimeGrid grid;
  ballsim::LaunchDistribution launch;
  const trajkit::Dataset ds = ballsim::synth_dataset(33, launch, grid, params, 0.01, 31);
  tvae::TrainConfig cfg;
  cfg.latent_dim = 2;
  cfg.hidden = 6;
  cfg.epochs = 2;
  cfg.batch = 8;
  cfg.seed = 1;
  const AblationResult result = ablation_ci(ds, cfg, 10, 3);
  CHECK(result.ci.size() > 0);
  CHECK(result.full.size() > 0);
  CHECK(result.ci_mean > 0.0);
  CHECK(result.full_mean > 0.0);
  CHECK(std::isfinite(result.ci_mean));
  CHECK(std::isfinite(result.full_mean));
}
