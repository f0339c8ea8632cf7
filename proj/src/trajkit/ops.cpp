#include "trajkit/ops.hpp"

#include <algorithm>
#include <cmath>

namespace trajkit {

MaskedTrajectory resample_to_grid(const Trajectory& traj, const TimeGrid& grid) {
  validate(traj);
  validate(grid);
  MaskedTrajectory out = MaskedTrajectory::zeros(grid.steps);
  const double tol = grid.dt / 2.0;
  for (int i = 0; i < grid.steps; ++i) {
    const double t = grid.time(i);
    // First sample with time >= t; nearest is it or its predecessor.
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t best = traj.times.size();
    double best_dist = tol;
    auto consider = [&](std::size_t j) {
      double d = std::abs(traj.times[j] - t);
      if (d < best_dist || (d == best_dist && j < best)) {
        best = j;
        best_dist = d;
      }
    };
    if (it != traj.times.end()) consider(static_cast<std::size_t>(it - traj.times.begin()));
    if (it != traj.times.begin()) consider(static_cast<std::size_t>(it - traj.times.begin()) - 1);
    if (best < traj.times.size() && traj.is_valid_sample(best)) {
      out.values[static_cast<std::size_t>(i)] = traj.positions[best];
      out.mask[static_cast<std::size_t>(i)] = 1;
    }
  }
  out.cut = grid.steps;
  validate(out);
  return out;
}

TimeGrid natural_grid(const Trajectory& traj, double dt) {
  validate(traj);
  TimeGrid grid;
  grid.dt = dt;
  grid.origin = traj.times.front();
  double span = traj.times.back() - traj.times.front();
  grid.steps = static_cast<int>(std::floor(span / dt + 0.5)) + 1;
  validate(grid);
  return grid;
}

MaskedTrajectory make_prefix(const MaskedTrajectory& full, int t_cut) {
  if (t_cut < 0 || t_cut > full.size())
    throw DataError("cut " + std::to_string(t_cut) + " out of range [0, " +
                    std::to_string(full.size()) + "]");
  MaskedTrajectory out = MaskedTrajectory::zeros(full.size());
  for (int i = 0; i < t_cut; ++i) {
    auto j = static_cast<std::size_t>(i);
    out.mask[j] = full.mask[j];
    if (out.mask[j]) out.values[j] = full.values[j];
  }
  out.cut = t_cut;
  validate(out);
  return out;
}

MaskedTrajectory corrupt(const MaskedTrajectory& m, double p_miss, double p_outlier,
                         const Box3& domain_box, Rng& rng) {
  MaskedTrajectory out = m;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < out.cut && i < out.size(); ++i) {
    auto j = static_cast<std::size_t>(i);
    if (!out.mask[j]) continue;
    if (unit(rng) < p_miss) {
      out.mask[j] = 0;
      out.values[j].setZero();
      continue;
    }
    if (unit(rng) < p_outlier) {
      for (int c = 0; c < 3; ++c)
        out.values[j][c] = domain_box.lo[c] + unit(rng) * (domain_box.hi[c] - domain_box.lo[c]);
    }
  }
  validate(out);
  return out;
}

MaskedTrajectory window_sample(const MaskedTrajectory& source, int n_steps, Rng& rng) {
  if (source.size() < 1) throw DataError("empty window source");
  MaskedTrajectory out = MaskedTrajectory::zeros(n_steps);
  int start = 0;
  if (source.size() > n_steps) {
    std::uniform_int_distribution<int> pick(0, source.size() - n_steps);
    start = pick(rng);
  }
  const int n_copy = std::min(n_steps, source.size());
  for (int i = 0; i < n_copy; ++i) {
    auto src = static_cast<std::size_t>(start + i);
    auto dst = static_cast<std::size_t>(i);
    out.mask[dst] = source.mask[src];
    if (out.mask[dst]) out.values[dst] = source.values[src];
  }
  out.cut = n_steps;
  validate(out);
  return out;
}

}  // namespace trajkit
