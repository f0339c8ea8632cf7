#pragma once

#include <cstdint>

#include "ballsim/physics.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace ballsim {

// Launch states are drawn from a box of release positions behind the -x
// table end and a velocity cone aimed along +x.  Angles in degrees.
struct LaunchDistribution {
  trajkit::Box3 position_box{Vec3{-2.1, -0.1, 0.9}, Vec3{-1.9, 0.1, 1.1}};
  double speed_min = 4.0;   // m/s
  double speed_max = 8.0;
  double elevation_min_deg = 5.0;
  double elevation_max_deg = 25.0;
  double azimuth_half_deg = 15.0;
};

void validate(const LaunchDistribution& launch);

// Draw order: position x,y,z, then speed, elevation, azimuth.
BallState sample_launch(const LaunchDistribution& launch, trajkit::Rng& rng);

// Simulates `count` launches on the grid, truncates each trajectory at the
// first sample below the floor (z < 0), and adds i.i.d. Gaussian noise of
// std noise_std per coordinate.  The noise-free path is kept as ground
// truth.  The last round(count * test_fraction) trajectories form the test
// split.  Each trajectory uses the derived seed (seed, index), so results
// do not depend on scheduling.
trajkit::Dataset synth_dataset(int count, const LaunchDistribution& launch,
                               const trajkit::TimeGrid& grid, const PhysicsParams& params,
                               double noise_std, std::uint64_t seed,
                               double test_fraction = 1.0 / 11.0);

}  // namespace ballsim
