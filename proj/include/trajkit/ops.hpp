#pragma once

#include "trajkit/rng.hpp"
#include "trajkit/types.hpp"

namespace trajkit {

/// Nearest-neighbor resampling onto a grid: step i takes the sample closest
/// to grid.time(i) when that distance is at most dt/2 (ties go to the
/// earlier sample); steps whose nearest sample is farther, or flagged
/// invalid, get mask 0 and value zero. No interpolation: every nonzero
/// output value is one of the input positions. Output cut = grid.steps
/// (full-trajectory semantics).
MaskedTrajectory resample_to_grid(const Trajectory& traj, const TimeGrid& grid);

/// Grid with origin at the first sample and enough steps at spacing dt to
/// cover the whole trajectory.
TimeGrid natural_grid(const Trajectory& traj, double dt);

/// Keeps observations before t_cut, zeroes everything after, sets cut.
MaskedTrajectory make_prefix(const MaskedTrajectory& full, int t_cut);

/// Training-time augmentation on the observed prefix (steps < cut): each
/// observed step is dropped with p_miss, and each survivor is replaced by a
/// uniform draw from domain_box with p_outlier.
MaskedTrajectory corrupt(const MaskedTrajectory& m, double p_miss, double p_outlier,
                         const Box3& domain_box, Rng& rng);

/// Fits a source of any length onto an n_steps grid: shorter sources are
/// padded with a mask-0 tail, longer ones contribute a uniformly random
/// contiguous window of exactly n_steps steps.
MaskedTrajectory window_sample(const MaskedTrajectory& source, int n_steps, Rng& rng);

}  // namespace trajkit
