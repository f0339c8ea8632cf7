#include "ballsim/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "trajkit/errors.hpp"
#include "trajkit/parallel.hpp"

namespace ballsim {

namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

void validate(const LaunchDistribution& l) {
  const auto bad = [](const std::string& what) { throw trajkit::DataError("launch: " + what); };
  for (int c = 0; c < 3; ++c)
    if (!(l.position_box.lo[c] <= l.position_box.hi[c])) bad("empty position box");
  if (!(l.speed_min > 0.0 && l.speed_min <= l.speed_max)) bad("empty speed range");
  if (!(l.elevation_min_deg <= l.elevation_max_deg)) bad("empty elevation range");
  if (!(l.azimuth_half_deg >= 0.0)) bad("negative azimuth cone");
}

BallState sample_launch(const LaunchDistribution& l, trajkit::Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BallState s;
  for (int c = 0; c < 3; ++c) {
    const double span = l.position_box.hi[c] - l.position_box.lo[c];
    s.position[c] = l.position_box.lo[c] + unit(rng) * span;
  }
  const double speed = l.speed_min + unit(rng) * (l.speed_max - l.speed_min);
  const double elev = deg(l.elevation_min_deg +
                          unit(rng) * (l.elevation_max_deg - l.elevation_min_deg));
  const double azim = deg(l.azimuth_half_deg * (2.0 * unit(rng) - 1.0));
  s.velocity = speed * Vec3{std::cos(elev) * std::cos(azim),
                            std::cos(elev) * std::sin(azim),
                            std::sin(elev)};
  return s;
}

trajkit::Dataset synth_dataset(int count, const LaunchDistribution& launch,
                               const trajkit::TimeGrid& grid, const PhysicsParams& params,
                               double noise_std, std::uint64_t seed, double test_fraction) {
  if (count < 1) throw trajkit::DataError("synth_dataset: count must be >= 1");
  if (!(noise_std >= 0.0)) throw trajkit::DataError("synth_dataset: noise_std must be >= 0");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw trajkit::DataError("synth_dataset: test_fraction must be in [0, 1)");
  validate(launch);
  validate(params);
  validate(grid);

  const int n_test = static_cast<int>(std::lround(count * test_fraction));
  trajkit::Dataset ds;
  ds.entries.resize(static_cast<std::size_t>(count));

  trajkit::parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
    trajkit::Rng rng = trajkit::make_rng(trajkit::derived_seed(seed, i));
    const BallState init = sample_launch(launch, rng);
    const trajkit::Trajectory path = simulate(init, grid, params);

    int length = grid.steps;
    for (int j = 0; j < grid.steps; ++j) {
      if (path.positions[static_cast<std::size_t>(j)].z() < 0.0) {
        length = j;
        break;
      }
    }
    length = std::max(length, 2);

    trajkit::DatasetEntry& entry = ds.entries[i];
    entry.traj.id = static_cast<std::int64_t>(i);
    entry.split = static_cast<int>(i) >= count - n_test ? trajkit::Split::Test
                                                        : trajkit::Split::Train;
    entry.traj.times.assign(path.times.begin(), path.times.begin() + length);
    entry.truth.assign(path.positions.begin(), path.positions.begin() + length);
    entry.traj.positions.resize(static_cast<std::size_t>(length));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < length; ++j) {
      Vec3 noise;
      for (int c = 0; c < 3; ++c) noise[c] = gauss(rng);
      entry.traj.positions[static_cast<std::size_t>(j)] =
          entry.truth[static_cast<std::size_t>(j)] + noise_std * noise;
    }
  });
  return ds;
}

}  // namespace ballsim
