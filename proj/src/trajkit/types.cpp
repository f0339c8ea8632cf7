#include "trajkit/types.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace trajkit {

std::size_t Trajectory::valid_count() const {
  if (valid.empty()) return times.size();
  std::size_t n = 0;
  for (auto v : valid) n += (v != 0);
  return n;
}

void validate(const Trajectory& traj) {
  if (traj.times.empty()) throw DataError("no samples");
  if (traj.times.size() != traj.positions.size())
    throw DataError("times/positions length mismatch");
  if (!traj.valid.empty() && traj.valid.size() != traj.times.size())
    throw DataError("valid flags length mismatch");
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    if (!(traj.times[i] > traj.times[i - 1])) throw DataError("unordered");
  for (const auto& p : traj.positions)
    if (!p.allFinite()) throw DataError("non-finite position");
  for (double t : traj.times)
    if (!std::isfinite(t)) throw DataError("non-finite time");
  if (traj.valid_count() < 2) throw DataError("fewer than 2 valid samples");
}

void validate(const TimeGrid& grid) {
  if (!(grid.dt > 0.0)) throw DataError("grid dt must be positive");
  if (grid.steps < 1) throw DataError("grid needs at least one step");
  if (!std::isfinite(grid.origin)) throw DataError("non-finite grid origin");
}

MaskedTrajectory MaskedTrajectory::zeros(int steps) {
  MaskedTrajectory m;
  m.values.assign(static_cast<std::size_t>(steps), Vec3::Zero());
  m.mask.assign(static_cast<std::size_t>(steps), 0);
  m.cut = steps;
  return m;
}

int MaskedTrajectory::observed_count() const {
  int n = 0;
  for (auto v : mask) n += (v != 0);
  return n;
}

int MaskedTrajectory::observed_length() const {
  for (int i = size(); i > 0; --i)
    if (mask[static_cast<std::size_t>(i - 1)] != 0) return i;
  return 0;
}

void validate(const MaskedTrajectory& m) {
  if (m.values.size() != m.mask.size()) throw DataError("values/mask length mismatch");
  if (m.cut < 0 || m.cut > m.size()) throw DataError("cut out of range");
  for (std::size_t i = 0; i < m.mask.size(); ++i) {
    if (m.mask[i] != 0 && m.mask[i] != 1) throw DataError("mask entries must be 0 or 1");
    if (m.mask[i] == 0 && !m.values[i].isZero())
      throw DataError("masked-out step holds a nonzero value");
    if (m.mask[i] == 1 && !m.values[i].allFinite())
      throw DataError("non-finite observed value");
    if (m.mask[i] == 1 && m.cut < m.size() && static_cast<int>(i) >= m.cut)
      throw DataError("observation past the cut");
  }
}

std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    default: return "test";
  }
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  throw DataError("unknown split tag: " + s);
}

std::size_t Dataset::count(Split s) const {
  std::size_t n = 0;
  for (const auto& e : entries) n += (e.split == s);
  return n;
}

std::vector<const DatasetEntry*> Dataset::split(Split s) const {
  std::vector<const DatasetEntry*> out;
  for (const auto& e : entries)
    if (e.split == s) out.push_back(&e);
  return out;
}

void validate(const Dataset& ds) {
  std::unordered_set<std::int64_t> seen;
  for (const auto& e : ds.entries) {
    validate(e.traj);
    if (!seen.insert(e.traj.id).second)
      throw DataError("duplicate id " + std::to_string(e.traj.id));
    if (!e.truth.empty() && e.truth.size() != e.traj.size())
      throw DataError("truth length mismatch for id " + std::to_string(e.traj.id));
  }
}

Box3 Box3::bounding(const std::vector<const DatasetEntry*>& entries, double inflate) {
  Box3 box;
  box.lo.setConstant(std::numeric_limits<double>::infinity());
  box.hi.setConstant(-std::numeric_limits<double>::infinity());
  for (const auto* e : entries)
    for (std::size_t i = 0; i < e->traj.size(); ++i)
      if (e->traj.is_valid_sample(i)) {
        box.lo = box.lo.cwiseMin(e->traj.positions[i]);
        box.hi = box.hi.cwiseMax(e->traj.positions[i]);
      }
  if (!box.lo.allFinite() || !box.hi.allFinite()) {
    box.lo.setZero();
    box.hi.setZero();
    return box;
  }
  Vec3 pad = (box.hi - box.lo) * (inflate * 0.5);
  box.lo -= pad;
  box.hi += pad;
  return box;
}

}  // namespace trajkit
