#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/errors.hpp"

namespace trajkit {

using Vec3 = Eigen::Vector3d;

/// A recorded ball flight: time-stamped 3-D positions, variable length.
/// `valid[i] == 0` marks a frame the vision system dropped.
struct Trajectory {
  std::int64_t id = 0;
  std::vector<double> times;      // seconds, strictly increasing
  std::vector<Vec3> positions;    // meters
  std::vector<std::uint8_t> valid;  // empty means all valid

  std::size_t size() const { return times.size(); }
  bool is_valid_sample(std::size_t i) const { return valid.empty() || valid[i] != 0; }
  std::size_t valid_count() const;
};

/// Throws DataError if the trajectory violates its invariants
/// (strictly increasing times, >= 2 valid samples, finite positions).
void validate(const Trajectory& traj);

/// Uniform time grid: step i lives at origin + i * dt.
struct TimeGrid {
  double dt = 1.0 / 180.0;  // seconds
  int steps = 216;          // 1.2 s horizon at 180 Hz
  double origin = 0.0;      // seconds

  double time(int i) const { return origin + i * dt; }
  double horizon() const { return steps * dt; }
};

void validate(const TimeGrid& grid);

/// Zero-padded observations on a time grid plus a {0,1} per-step mask.
/// `cut` is the first unobserved step for prefix semantics; a value of
/// size() denotes a full trajectory (mask may still have holes anywhere).
struct MaskedTrajectory {
  std::vector<Vec3> values;         // zero where mask is 0
  std::vector<std::uint8_t> mask;   // {0,1}
  int cut = 0;

  int size() const { return static_cast<int>(mask.size()); }
  static MaskedTrajectory zeros(int steps);

  int observed_count() const;
  /// Index one past the last observed step (0 when nothing is observed).
  int observed_length() const;
};

/// Throws DataError if mask/value coupling or the cut range is violated.
/// Every operation that builds a MaskedTrajectory runs this on its output.
void validate(const MaskedTrajectory& m);

enum class Split { Train, Val, Test };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

/// One stored trajectory plus its split tag. `truth` optionally carries the
/// noise-free path aligned with the samples (synthetic data keeps it so the
/// evaluation can score against ground truth instead of noisy measurements).
struct DatasetEntry {
  Trajectory traj;
  Split split = Split::Train;
  std::vector<Vec3> truth;  // empty when not available

  bool has_truth() const { return !truth.empty(); }
};

struct Dataset {
  std::vector<DatasetEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::size_t count(Split s) const;
  std::vector<const DatasetEntry*> split(Split s) const;
};

void validate(const Dataset& ds);

/// Axis-aligned box, used as the outlier value domain.
struct Box3 {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  static Box3 bounding(const std::vector<const DatasetEntry*>& entries, double inflate = 0.0);
};

}  // namespace trajkit
